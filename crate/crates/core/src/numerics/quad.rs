use super::NumericsError;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_478_506,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
// 10-point Gauss weights for the odd-indexed Kronrod nodes
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Integration domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Finite(f64, f64),
    /// `[a, ∞)`
    HalfLine(f64),
    WholeLine,
}

/// Which endpoints carry an integrable singularity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Singular {
    pub lower: bool,
    pub upper: bool,
}

impl Singular {
    pub const NONE: Singular = Singular { lower: false, upper: false };
    pub const LOWER: Singular = Singular { lower: true, upper: false };
    pub const UPPER: Singular = Singular { lower: false, upper: true };
    pub const BOTH: Singular = Singular { lower: true, upper: true };
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub singular_endpoints: Singular,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { rel_tol: 1e-9, abs_tol: 1e-12, max_subdivisions: 2000, singular_endpoints: Singular::NONE }
    }
}

impl QuadratureSpec {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn singular(mut self, s: Singular) -> Self {
        self.singular_endpoints = s;
        self
    }

    fn validate(&self) -> Result<(), NumericsError> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) || self.max_subdivisions == 0 {
            return Err(NumericsError::Invalid(format!("bad quadrature spec {self:?}")));
        }
        Ok(())
    }
}

/// A numerical value with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    pub est_abs_error: f64,
}

impl EvalResult {
    pub fn exact(value: f64) -> Self {
        EvalResult { value, est_abs_error: 0.0 }
    }
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk21<E>(f: &mut impl FnMut(f64) -> Result<f64, E>, a: f64, b: f64) -> Result<Panel, E> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut resk = fc * WGK[10];
    let mut resabs = resk.abs();
    let mut resg = 0.0;
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = resk * 0.5;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let result = resk * half;
    resabs *= half.abs();
    resasc *= half.abs();
    let mut err = ((resk - resg) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Ok(Panel { a, b, value: result, error: err })
}

/// Globally adaptive GK21 bisection on a finite interval of the mapped variable.
fn adaptive<E: From<NumericsError>>(
    mut g: impl FnMut(f64) -> Result<f64, E>,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<EvalResult, E> {
    let mut panels = vec![gk21(&mut g, a, b)?];
    loop {
        let total: f64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.error).sum();
        if err <= spec.abs_tol.max(spec.rel_tol * total.abs()) {
            return Ok(EvalResult { value: total, est_abs_error: err });
        }
        // deterministic choice: first panel with the largest error
        let mut worst = 0;
        for (i, p) in panels.iter().enumerate() {
            if p.error > panels[worst].error {
                worst = i;
            }
        }
        let p = &panels[worst];
        let mid = 0.5 * (p.a + p.b);
        let too_narrow =
            !(mid > p.a && mid < p.b) || (p.b - p.a).abs() <= 1e-14 * (p.a.abs().max(p.b.abs()).max(1e-300));
        if panels.len() >= spec.max_subdivisions || too_narrow {
            return Err(
                NumericsError::NoConvergence { subdivisions: panels.len(), value: total, est_abs_error: err }.into()
            );
        }
        let (pa, pb) = (p.a, p.b);
        let left = gk21(&mut g, pa, mid)?;
        let right = gk21(&mut g, mid, pb)?;
        panels[worst] = left;
        panels.push(right);
    }
}

fn check<E: From<NumericsError>>(v: f64, x: f64) -> Result<f64, E> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(NumericsError::NonFinite { x }.into())
    }
}

/// `∫_a^b f` with an integrable singularity at `a`, via `x = a + (b-a) e^{-v}`
/// and `v = u/(1-u)`.
fn singular_lower<E: From<NumericsError>>(
    f: &mut impl FnMut(f64) -> Result<f64, E>,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<EvalResult, E> {
    let len = b - a;
    adaptive(
        |u: f64| {
            let om = 1.0 - u;
            if om <= 0.0 {
                return Ok(0.0);
            }
            let v = u / om;
            let d = len * (-v).exp();
            let x = a + d;
            if d == 0.0 || x == a {
                return Ok(0.0);
            }
            let y = f(x)?;
            check(y * d / (om * om), x)
        },
        0.0,
        1.0,
        spec,
    )
}

fn singular_upper<E: From<NumericsError>>(
    f: &mut impl FnMut(f64) -> Result<f64, E>,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<EvalResult, E> {
    let len = b - a;
    adaptive(
        |u: f64| {
            let om = 1.0 - u;
            if om <= 0.0 {
                return Ok(0.0);
            }
            let v = u / om;
            let d = len * (-v).exp();
            let x = b - d;
            if d == 0.0 || x == b {
                return Ok(0.0);
            }
            let y = f(x)?;
            check(y * d / (om * om), x)
        },
        0.0,
        1.0,
        spec,
    )
}

fn finite<E: From<NumericsError>>(
    f: &mut impl FnMut(f64) -> Result<f64, E>,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<EvalResult, E> {
    let s = spec.singular_endpoints;
    match (s.lower, s.upper) {
        (false, false) => adaptive(|x| check(f(x)?, x), a, b, spec),
        (true, false) => singular_lower(f, a, b, spec),
        (false, true) => singular_upper(f, a, b, spec),
        (true, true) => {
            let m = 0.5 * (a + b);
            let l = singular_lower(f, a, m, spec)?;
            let r = singular_upper(f, m, b, spec)?;
            Ok(add(l, r))
        }
    }
}

fn half_line<E: From<NumericsError>>(
    f: &mut impl FnMut(f64) -> Result<f64, E>,
    start: f64,
    spec: &QuadratureSpec,
) -> Result<EvalResult, E> {
    adaptive(
        |u: f64| {
            let om = 1.0 - u;
            if om <= 0.0 {
                return Ok(0.0);
            }
            let t = start + u / om;
            if !t.is_finite() {
                return Ok(0.0);
            }
            let y = f(t)?;
            check(y / (om * om), t)
        },
        0.0,
        1.0,
        spec,
    )
}

fn add(l: EvalResult, r: EvalResult) -> EvalResult {
    EvalResult { value: l.value + r.value, est_abs_error: l.est_abs_error + r.est_abs_error }
}

/// Integrate a fallible integrand; errors from `f` are propagated unchanged.
pub fn try_integrate<E: From<NumericsError>>(
    mut f: impl FnMut(f64) -> Result<f64, E>,
    domain: Domain,
    spec: &QuadratureSpec,
) -> Result<EvalResult, E> {
    spec.validate()?;
    match domain {
        Domain::Finite(a, b) => {
            if !(a.is_finite() && b.is_finite()) {
                return Err(NumericsError::Invalid(format!("finite domain [{a}, {b}]")).into());
            }
            if a == b {
                return Ok(EvalResult::exact(0.0));
            }
            if a > b {
                let r = finite(&mut f, b, a, spec)?;
                return Ok(EvalResult { value: -r.value, ..r });
            }
            finite(&mut f, a, b, spec)
        }
        Domain::HalfLine(a) => {
            if !a.is_finite() {
                return Err(NumericsError::Invalid(format!("half line from {a}")).into());
            }
            if spec.singular_endpoints.lower {
                let head = singular_lower(&mut f, a, a + 1.0, spec)?;
                let rest = half_line(&mut f, a + 1.0, spec)?;
                Ok(add(head, rest))
            } else {
                half_line(&mut f, a, spec)
            }
        }
        Domain::WholeLine => adaptive(
            |u: f64| {
                let d = 1.0 - u * u;
                if d <= 0.0 {
                    return Ok(0.0);
                }
                let x = u / d;
                if !x.is_finite() {
                    return Ok(0.0);
                }
                let y = f(x)?;
                check(y * (1.0 + u * u) / (d * d), x)
            },
            -1.0,
            1.0,
            spec,
        ),
    }
}

/// Integrate `f` over `domain`.
///
/// ```
/// use etaue::numerics::{integrate, Domain, QuadratureSpec};
/// let r = integrate(|x| (-x * x).exp(), Domain::WholeLine, &QuadratureSpec::default()).unwrap();
/// assert!((r.value - std::f64::consts::PI.sqrt()).abs() < 1e-10);
/// ```
pub fn integrate(
    mut f: impl FnMut(f64) -> f64,
    domain: Domain,
    spec: &QuadratureSpec,
) -> Result<EvalResult, NumericsError> {
    try_integrate(|x| Ok::<f64, NumericsError>(f(x)), domain, spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn kronrod_weights_sum_to_two() {
        let s: f64 = WGK[10] + 2.0 * WGK[..10].iter().sum::<f64>();
        assert!((s - 2.0).abs() < 1e-15);
        let g: f64 = 2.0 * WG.iter().sum::<f64>();
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn polynomial_exactness() {
        // Kronrod 21 integrates degree 31 exactly, Gauss 10 degree 19
        for deg in [0usize, 5, 19, 30, 31] {
            let mut fi = |x: f64| Ok::<f64, NumericsError>(x.powi(deg as i32) + 1.0);
            let p = gk21(&mut fi, 0.0, 1.0).unwrap();
            let exact = 1.0 / (deg as f64 + 1.0) + 1.0;
            assert!((p.value - exact).abs() < 1e-14, "degree {deg}");
        }
    }

    #[test]
    fn exponential_half_line() {
        let r = integrate(|t| (-t).exp(), Domain::HalfLine(0.0), &QuadratureSpec::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sqrt_singularity() {
        let spec = QuadratureSpec::default().singular(Singular::LOWER);
        let r = integrate(|t| t.powf(-0.5) * (-t).exp(), Domain::HalfLine(0.0), &spec).unwrap();
        assert!((r.value - PI.sqrt()).abs() < 1e-9 * PI.sqrt());
    }

    #[test]
    fn log_singularity_at_upper_end() {
        let spec = QuadratureSpec::default().singular(Singular::UPPER);
        let r = integrate(|x| -(1.0 - x).ln(), Domain::Finite(0.0, 1.0), &spec).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn reversed_interval_negates() {
        let spec = QuadratureSpec::default();
        let a = integrate(|x| x * x, Domain::Finite(0.0, 2.0), &spec).unwrap().value;
        let b = integrate(|x| x * x, Domain::Finite(2.0, 0.0), &spec).unwrap().value;
        assert_eq!(a, -b);
    }

    #[test]
    fn nonfinite_integrand_is_an_error() {
        let r = integrate(|x| 1.0 / x, Domain::Finite(-1.0, 1.0), &QuadratureSpec::default());
        assert!(matches!(r, Err(NumericsError::NonFinite { .. })));
    }

    #[test]
    fn nonconvergence_is_reported() {
        let spec = QuadratureSpec { max_subdivisions: 3, ..QuadratureSpec::default() };
        let r = integrate(|x| (1.0 / (x + 1e-3)).sin(), Domain::Finite(0.0, 1.0), &spec);
        assert!(matches!(r, Err(NumericsError::NoConvergence { .. })));
    }

    #[test]
    fn bad_spec_rejected() {
        let spec = QuadratureSpec { rel_tol: 0.0, ..QuadratureSpec::default() };
        assert!(integrate(|x| x, Domain::Finite(0.0, 1.0), &spec).is_err());
    }
}
