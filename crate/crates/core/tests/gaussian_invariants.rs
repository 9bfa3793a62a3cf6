use etaue::gaussian::*;
use etaue::numerics::{integrate, try_integrate, Domain, QuadratureSpec, Singular};
use etaue::specfun::erf;
use etaue::Error;
use std::f64::consts::PI;

fn spec() -> QuadratureSpec {
    QuadratureSpec::default().with_rel_tol(1e-11).with_abs_tol(1e-300)
}

fn closed_rho0(l: f64) -> f64 {
    (-l * l / 2.0).exp() * (1.0 + l * l) / (2.0 * (2.0 * PI).sqrt())
}

fn closed_rho_half(l: f64) -> f64 {
    (-l * l).exp() * (2.0 + (2.0 * PI).sqrt() * (l * l / 2.0).exp() * l * erf(l / 2f64.sqrt()).unwrap())
        / (4.0 * PI.sqrt())
}

fn closed_rho1(l: f64) -> f64 {
    (-l * l / 2.0).exp() / (2.0 * PI).sqrt()
}

#[test]
fn limit_collapse_on_grid() {
    for i in 0..201 {
        let l = -5.0 + 0.05 * i as f64;
        assert!((spectral_density_gaussian(l, 0.0).unwrap() - closed_rho0(l)).abs() < 1e-9);
        assert!((spectral_density_gaussian(l, 0.5).unwrap() - closed_rho_half(l)).abs() < 1e-9);
        assert!((spectral_density_gaussian(l, 1.0).unwrap() - closed_rho1(l)).abs() < 1e-9);
    }
}

/// ∬ jpd over λ₁ < λ₂, doubled; inner integral over the spacing d = λ₂ - λ₁.
fn eigen_mass(eta: f64) -> f64 {
    let g = GaussianEnsemble::new(eta).unwrap();
    let inner = |l1: f64| -> Result<f64, Error> {
        // l1 + d rounds to l1 only on a set of negligible measure
        let f = |d: f64| if l1 + d == l1 { Ok(0.0) } else { g.jpd_eigen(l1, l1 + d) };
        // l2 - l1 is quantized to ulp(l1) near d = 0; that region holds < 1e-8 of
        // the mass, so an absolute floor keeps the inner integral from chasing noise
        let inner_spec = spec().with_abs_tol(1e-10).singular(Singular::LOWER);
        Ok(try_integrate(f, Domain::HalfLine(0.0), &inner_spec)?.value)
    };
    2.0 * try_integrate(inner, Domain::WholeLine, &spec()).unwrap().value
}

#[test]
fn normalizations() {
    for &eta in &[0.0, 0.25, 0.5, 0.75, 1.0, 1.25] {
        assert!((eigen_mass(eta) - 1.0).abs() < 1e-6, "jpd mass at eta = {eta}");
        let rho = integrate(|l| spectral_density_gaussian(l, eta).unwrap(), Domain::WholeLine, &spec()).unwrap();
        assert!((rho.value - 1.0).abs() < 1e-6, "rho mass at eta = {eta}");
        let gap = try_integrate(
            |s| if s == 0.0 { Ok(0.0) } else { gap_probability_gaussian(s, eta) },
            Domain::HalfLine(0.0),
            &spec().singular(Singular::LOWER),
        )
        .unwrap();
        assert!((gap.value - 1.0).abs() < 1e-6, "gap mass at eta = {eta}");
    }
}

#[test]
fn density_is_marginal_of_jpd() {
    for &eta in &[0.0, 0.45, 0.75] {
        let g = GaussianEnsemble::new(eta).unwrap();
        for &l in &[0.0, 1.0, -1.0, 2.0, -2.0] {
            let f = |m: f64| g.jpd_eigen(l, m);
            let lo = try_integrate(f, Domain::Finite(l - 40.0, l), &spec().singular(Singular::UPPER)).unwrap();
            let hi = try_integrate(f, Domain::HalfLine(l), &spec().singular(Singular::LOWER)).unwrap();
            let rho = g.spectral_density(l).unwrap();
            assert!((lo.value + hi.value - rho).abs() < 1e-7, "eta = {eta}, lambda = {l}");
        }
    }
}

#[test]
fn marginal_tower() {
    let probes = [(0.0, 0.3), (1.1, -0.4), (-0.7, 0.9), (2.0, 1.5), (0.25, -1.6)];
    for &eta in &[0.0, 0.3, 0.5, 0.8] {
        for &(x, y) in &probes {
            // ∫ p₂(x, ·) = p₁(x), split at the singular point y = x
            let f = |v: f64| marginal_p2(x, v, eta);
            let l = try_integrate(f, Domain::Finite(x - 30.0, x), &spec().singular(Singular::UPPER)).unwrap();
            let r = try_integrate(f, Domain::HalfLine(x), &spec().singular(Singular::LOWER)).unwrap();
            let p1 = marginal_p1(x, eta).unwrap();
            assert!((l.value + r.value - p1).abs() < 1e-7, "p2 -> p1 at eta = {eta}, x = {x}");

            // ∫ p₃(x, y, ·) = p₂(x, y)
            let g = |t: f64| marginal_p3(x, y, t, eta);
            let whole = try_integrate(g, Domain::WholeLine, &spec()).unwrap();
            let p2 = marginal_p2(x, y, eta).unwrap();
            assert!((whole.value - p2).abs() < 1e-6, "p3 -> p2 at eta = {eta}, ({x}, {y})");
        }
    }
}

#[test]
fn p3_is_marginal_of_entries() {
    let (x, y, t) = (0.4, -0.3, 0.8);
    for &eta in &[0.2, 0.5, 0.9] {
        let g = GaussianEnsemble::new(eta).unwrap();
        let f = |s: f64| g.jpd_entries(&etaue::HermitianEntries::new(x, y, t, s));
        let v = try_integrate(f, Domain::WholeLine, &spec()).unwrap().value;
        let p3 = marginal_p3(x, y, t, eta).unwrap();
        assert!(((v - p3) / p3).abs() < 1e-9);
    }
}

#[test]
fn p1_is_triple_integral_of_entries() {
    // reduction-free oracle: integrate the entry density over (y, t, s) in
    // polar coordinates for (t, s), which the density depends on via t²+s²
    let (x, eta) = (2.0, 0.5);
    let g = GaussianEnsemble::new(eta).unwrap();
    let over_r = |y: f64| -> Result<f64, Error> {
        let f = |r: f64| Ok::<f64, Error>(2.0 * PI * r * g.jpd_entries(&etaue::HermitianEntries::new(x, y, r, 0.0))?);
        Ok(try_integrate(f, Domain::HalfLine(0.0), &spec())?.value)
    };
    let lo = try_integrate(over_r, Domain::Finite(x - 30.0, x), &spec().singular(Singular::UPPER)).unwrap();
    let hi = try_integrate(over_r, Domain::HalfLine(x), &spec().singular(Singular::LOWER)).unwrap();
    let p1 = marginal_p1(x, eta).unwrap();
    assert!(((lo.value + hi.value - p1) / p1).abs() < 1e-8);
}

#[test]
fn p2_is_double_integral_of_entries() {
    let (x, y, eta) = (0.0, 2.0, 0.3);
    let g = GaussianEnsemble::new(eta).unwrap();
    let f = |r: f64| Ok::<f64, Error>(2.0 * PI * r * g.jpd_entries(&etaue::HermitianEntries::new(x, y, r, 0.0))?);
    let v = try_integrate(f, Domain::HalfLine(0.0), &spec()).unwrap().value;
    let p2 = marginal_p2(x, y, eta).unwrap();
    assert!(((v - p2) / p2).abs() < 1e-9);
}

#[test]
fn twinning_pointwise() {
    for &eta in &[0.5, 0.7, 0.9, 1.0] {
        for i in 0..21 {
            for j in 0..21 {
                let (a, b) = (-3.0 + 0.3 * i as f64, -3.0 + 0.3 * j as f64);
                let u = jpd_eigen(a, b, eta).unwrap();
                let r = jpd_eigen_real_twin(a, b, 2.0 * eta - 1.0).unwrap();
                assert!((u - r).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn goe_twin_density_is_rho_half() {
    for &l in &[0.0, 0.8, -1.9] {
        let f = |m: f64| jpd_eigen_real_twin(l, m, 0.0);
        let lo = try_integrate(f, Domain::Finite(l - 40.0, l), &spec()).unwrap().value;
        let hi = try_integrate(f, Domain::HalfLine(l), &spec()).unwrap().value;
        assert!((lo + hi - closed_rho_half(l)).abs() < 1e-10);
    }
}

#[test]
fn anti_gap_normalized() {
    let r = try_integrate(
        |s| if s == 0.0 { Ok(0.0) } else { gap_probability_gaussian(s, 1.25) },
        Domain::HalfLine(0.0),
        &spec().singular(Singular::LOWER),
    )
    .unwrap();
    assert!((r.value - 1.0).abs() < 1e-8);
}

#[test]
fn appendix_tail_ratio_at_six() {
    for &eta in &[0.2, 0.5, 0.8] {
        let r = marginal_p1(6.0, eta).unwrap() / p1_asymptotic(6.0, eta).unwrap();
        assert!((0.95..=1.05).contains(&r), "eta = {eta}: {r}");
    }
}
