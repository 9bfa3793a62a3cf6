use super::rng::RngStream;
use crate::error::{domain, Error, Result};
use std::f64::consts::PI;

/// Probe points used to check a user-supplied envelope.
pub const PROBE_POINTS: usize = 4096;
/// Required headroom of an envelope over the density at every probe point.
pub const SAFETY_MARGIN: f64 = 1.1;
/// Proposals tolerated for a single draw before giving up (acceptance < 1e-4).
pub const MAX_ATTEMPTS: u64 = 1_000_000;

#[derive(Debug, Clone, Copy)]
enum Shape {
    Flat,
    // h / sqrt(|x - anchor|), anchor at one end of the cell
    InvSqrt { anchor: f64 },
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    lo: f64,
    hi: f64,
    h: f64,
    shape: Shape,
}

impl Cell {
    fn mass(&self) -> f64 {
        match self.shape {
            Shape::Flat => self.h * (self.hi - self.lo),
            Shape::InvSqrt { .. } => 2.0 * self.h * (self.hi - self.lo).sqrt(),
        }
    }

    fn height(&self, x: f64) -> f64 {
        match self.shape {
            Shape::Flat => self.h,
            Shape::InvSqrt { anchor } => self.h / (x - anchor).abs().sqrt(),
        }
    }

    fn draw(&self, rng: &mut RngStream) -> (f64, f64) {
        match self.shape {
            Shape::Flat => (self.lo + (self.hi - self.lo) * rng.uniform(), self.h),
            Shape::InvSqrt { anchor } => {
                // density ∝ r^{-1/2} on (0, w]: r = w U²
                let w = self.hi - self.lo;
                let u = rng.uniform_open();
                let r = w * u * u;
                let x = if anchor == self.lo { self.lo + r } else { self.hi - r };
                (x, self.h / r.sqrt())
            }
        }
    }
}

/// Piecewise upper bound on a density, sampled exactly.
///
/// Cells are either flat or of the form `h/√|x - a|` with `a` a cell end,
/// which covers integrable logarithmic spikes.
#[derive(Debug, Clone)]
pub struct GridTable {
    cells: Vec<Cell>,
    cum: Vec<f64>,
}

impl GridTable {
    /// Flat cells between consecutive `edges` with the given heights.
    pub fn from_heights(edges: &[f64], heights: &[f64]) -> Result<Self> {
        if edges.len() < 2 || heights.len() + 1 != edges.len() {
            return Err(domain("grid table needs n+1 edges for n heights"));
        }
        let mut b = GridBuilder::default();
        for (w, &h) in edges.windows(2).zip(heights) {
            b.flat(w[0], w[1], h)?;
        }
        b.build()
    }

    /// Non-rigorous table from probing the density: each cell gets
    /// `SAFETY_MARGIN` times the largest of several values inside it.
    pub fn from_probes(density: impl Fn(f64) -> Result<f64>, lo: f64, hi: f64, cells: usize) -> Result<Self> {
        if !(lo < hi) || cells == 0 {
            return Err(domain(format!("bad probe table range [{lo}, {hi}] with {cells} cells")));
        }
        let per = (PROBE_POINTS / cells).max(4);
        let w = (hi - lo) / cells as f64;
        let mut edges = Vec::with_capacity(cells + 1);
        let mut heights = Vec::with_capacity(cells);
        for i in 0..cells {
            let a = lo + i as f64 * w;
            edges.push(a);
            let mut m: f64 = 0.0;
            for k in 0..=per {
                m = m.max(density(a + w * k as f64 / per as f64)?);
            }
            heights.push(SAFETY_MARGIN * m);
        }
        edges.push(hi);
        Self::from_heights(&edges, &heights)
    }

    pub fn support(&self) -> (f64, f64) {
        (self.cells[0].lo, self.cells[self.cells.len() - 1].hi)
    }

    pub fn mass(&self) -> f64 {
        self.cum[self.cum.len() - 1]
    }

    pub fn value(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if !(x >= lo && x <= hi) {
            return 0.0;
        }
        let i = self.cells.partition_point(|c| c.hi < x).min(self.cells.len() - 1);
        self.cells[i].height(x)
    }

    pub(crate) fn draw(&self, rng: &mut RngStream) -> (f64, f64) {
        let target = rng.uniform() * self.mass();
        let i = self.cum.partition_point(|&c| c <= target).min(self.cells.len() - 1);
        self.cells[i].draw(rng)
    }
}

/// Incremental construction of a [`GridTable`] from left to right.
#[derive(Debug, Default)]
pub struct GridBuilder {
    cells: Vec<Cell>,
}

impl GridBuilder {
    fn push(&mut self, c: Cell) -> Result<()> {
        if !(c.lo < c.hi) || !(c.h >= 0.0) || !c.h.is_finite() {
            return Err(domain(format!("bad envelope cell [{}, {}] height {}", c.lo, c.hi, c.h)));
        }
        if let Some(last) = self.cells.last() {
            if last.hi != c.lo {
                return Err(domain("envelope cells must be contiguous"));
            }
        }
        self.cells.push(c);
        Ok(())
    }

    pub fn flat(&mut self, lo: f64, hi: f64, h: f64) -> Result<&mut Self> {
        self.push(Cell { lo, hi, h, shape: Shape::Flat })?;
        Ok(self)
    }

    /// Cell bounded by `h/√|x - anchor|`, `anchor` being `lo` or `hi`.
    pub fn inv_sqrt(&mut self, lo: f64, hi: f64, h: f64, anchor_at_lo: bool) -> Result<&mut Self> {
        let anchor = if anchor_at_lo { lo } else { hi };
        self.push(Cell { lo, hi, h, shape: Shape::InvSqrt { anchor } })?;
        Ok(self)
    }

    pub fn build(self) -> Result<GridTable> {
        if self.cells.is_empty() {
            return Err(domain("empty envelope"));
        }
        let mut cum = Vec::with_capacity(self.cells.len());
        let mut acc = 0.0;
        for c in &self.cells {
            acc += c.mass();
            cum.push(acc);
        }
        if !(acc > 0.0) || !acc.is_finite() {
            return Err(Error::Sampling(format!("envelope mass {acc}")));
        }
        Ok(GridTable { cells: self.cells, cum })
    }
}

/// Proposal distribution for [`rejection_sample`].
#[derive(Debug, Clone)]
pub enum Envelope {
    /// `scale` times the normal density with mean `mu` and deviation `sigma`.
    Gaussian {
        mu: f64,
        sigma: f64,
        scale: f64,
    },
    Grid(GridTable),
}

impl Envelope {
    pub fn value(&self, x: f64) -> f64 {
        match self {
            Envelope::Gaussian { mu, sigma, scale } => {
                let z = (x - mu) / sigma;
                scale * (-0.5 * z * z).exp() / (sigma * (2.0 * PI).sqrt())
            }
            Envelope::Grid(g) => g.value(x),
        }
    }

    /// Range scanned by [`Envelope::verify`].
    pub fn probe_range(&self) -> (f64, f64) {
        match self {
            Envelope::Gaussian { mu, sigma, .. } => (mu - 8.0 * sigma, mu + 8.0 * sigma),
            Envelope::Grid(g) => {
                // reach 10% past the support so mass outside it is seen
                let (lo, hi) = g.support();
                let w = 0.1 * (hi - lo);
                (lo - w, hi + w)
            }
        }
    }

    fn draw(&self, rng: &mut RngStream) -> (f64, f64) {
        match self {
            Envelope::Gaussian { mu, sigma, .. } => {
                let x = mu + sigma * rng.normal();
                (x, self.value(x))
            }
            Envelope::Grid(g) => g.draw(rng),
        }
    }

    /// Checks on `PROBE_POINTS` evenly spaced points that the envelope clears
    /// the density by the safety margin.
    pub fn verify(&self, density: impl Fn(f64) -> Result<f64>) -> Result<()> {
        if let Envelope::Gaussian { sigma, scale, .. } = self {
            if !(*sigma > 0.0 && *scale > 0.0) {
                return Err(domain(format!("Gaussian envelope needs sigma, scale > 0, got {sigma}, {scale}")));
            }
        }
        let (lo, hi) = self.probe_range();
        // values this far below the envelope peak are truncation, not violation
        let floor = 1e-14
            * (0..PROBE_POINTS)
                .map(|i| self.value(lo + (hi - lo) * (i as f64 + 0.5) / PROBE_POINTS as f64))
                .fold(0.0, f64::max);
        for i in 0..PROBE_POINTS {
            let x = lo + (hi - lo) * (i as f64 + 0.5) / PROBE_POINTS as f64;
            let d = density(x)?;
            let e = self.value(x);
            if d * SAFETY_MARGIN > e && d > floor {
                return Err(Error::EnvelopeViolation { x, density: d, envelope: e });
            }
        }
        Ok(())
    }
}

/// One accepted variate and the number of proposals it took.
#[derive(Debug, Clone, Copy)]
pub struct Draw {
    pub value: f64,
    pub attempts: u64,
}

/// Exact draw from the density proportional to `density` by rejection under
/// `env`. A proposal where the density exceeds the envelope is an error.
pub fn rejection_sample(density: impl Fn(f64) -> Result<f64>, env: &Envelope, rng: &mut RngStream) -> Result<Draw> {
    let mut attempts = 0;
    while attempts < MAX_ATTEMPTS {
        attempts += 1;
        let (x, e) = env.draw(rng);
        let d = density(x)?;
        if d > e * (1.0 + 1e-12) {
            return Err(Error::EnvelopeViolation { x, density: d, envelope: e });
        }
        if rng.uniform() * e < d {
            return Ok(Draw { value: x, attempts });
        }
    }
    Err(Error::Starvation { attempts })
}

/// Exact sampler that owns a verified envelope and tracks its acceptance rate.
pub struct RejectionSampler<F> {
    density: F,
    envelope: Envelope,
    attempts: u64,
    accepted: u64,
}

impl<F: Fn(f64) -> Result<f64>> RejectionSampler<F> {
    pub fn new(density: F, envelope: Envelope) -> Result<Self> {
        envelope.verify(&density)?;
        Ok(RejectionSampler { density, envelope, attempts: 0, accepted: 0 })
    }

    pub fn sample(&mut self, rng: &mut RngStream) -> Result<f64> {
        let d = rejection_sample(&self.density, &self.envelope, rng)?;
        self.attempts += d.attempts;
        self.accepted += 1;
        Ok(d.value)
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.attempts == 0 {
            return f64::NAN;
        }
        self.accepted as f64 / self.attempts as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ks_distance;

    fn std_normal(x: f64) -> Result<f64> {
        Ok((-0.5 * x * x).exp() / (2.0 * PI).sqrt())
    }

    fn normal_cdf(x: f64) -> f64 {
        0.5 * crate::specfun::erfc(-x / 2f64.sqrt()).unwrap()
    }

    #[test]
    fn self_envelope_rate() {
        let env = Envelope::Gaussian { mu: 0.0, sigma: 1.0, scale: 2.0 };
        let mut s = RejectionSampler::new(std_normal, env).unwrap();
        let mut rng = RngStream::new(5, 0);
        let xs: Vec<f64> = (0..20_000).map(|_| s.sample(&mut rng).unwrap()).collect();
        assert!((s.acceptance_rate() - 0.5).abs() < 0.02, "{}", s.acceptance_rate());
        assert!(ks_distance(&xs, normal_cdf).unwrap().ks_distance < 1.63 / (20_000f64).sqrt());
    }

    #[test]
    fn violation_detected() {
        let env = Envelope::Gaussian { mu: 0.0, sigma: 1.0, scale: 1.0 };
        // narrow spike the envelope cannot cover
        let spike = |x: f64| Ok(if (x - 3.0).abs() < 0.1 { 5.0 } else { 0.0 });
        assert!(matches!(RejectionSampler::new(spike, env), Err(Error::EnvelopeViolation { .. })));
        // mass just outside a grid table's support
        let g = GridTable::from_heights(&[0.0, 1.0], &[2.0]).unwrap();
        let wider = |x: f64| Ok(if (0.0..1.05).contains(&x) { 1.0 } else { 0.0 });
        assert!(matches!(Envelope::Grid(g.clone()).verify(wider), Err(Error::EnvelopeViolation { .. })));
        // a proposal above the envelope is caught while sampling
        let tall = |x: f64| Ok(if (0.0..=1.0).contains(&x) { 3.0 } else { 0.0 });
        assert!(matches!(
            rejection_sample(tall, &Envelope::Grid(g), &mut RngStream::new(1, 0)),
            Err(Error::EnvelopeViolation { .. })
        ));
    }

    #[test]
    fn starvation_detected() {
        let g = GridTable::from_heights(&[0.0, 1.0], &[1.0]).unwrap();
        let r = rejection_sample(|_| Ok(0.0), &Envelope::Grid(g), &mut RngStream::new(1, 0));
        assert!(matches!(r, Err(Error::Starvation { .. })));
    }

    #[test]
    fn inv_sqrt_cell_exact() {
        // density ∝ 1/√x on (0, 1]: CDF √x
        let mut b = GridBuilder::default();
        b.inv_sqrt(0.0, 1.0, 1.0, true).unwrap();
        let env = Envelope::Grid(b.build().unwrap());
        let mut rng = RngStream::new(9, 0);
        let xs: Vec<f64> =
            (0..200_000).map(|_| rejection_sample(|x| Ok(1.0 / x.sqrt()), &env, &mut rng).unwrap().value).collect();
        let d = ks_distance(&xs, |x| x.clamp(0.0, 1.0).sqrt()).unwrap().ks_distance;
        assert!(d < 1.63 / (200_000f64).sqrt(), "{d}");
        // anchored on the right
        let mut b = GridBuilder::default();
        b.inv_sqrt(-1.0, 0.0, 1.0, false).unwrap();
        let g = b.build().unwrap();
        assert!((g.mass() - 2.0).abs() < 1e-15);
        assert!((g.value(-0.25) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn probe_table_samples_target() {
        let g = GridTable::from_probes(std_normal, -9.0, 9.0, 256).unwrap();
        let env = Envelope::Grid(g);
        env.verify(std_normal).unwrap();
        let mut rng = RngStream::new(11, 0);
        let xs: Vec<f64> = (0..20_000).map(|_| rejection_sample(std_normal, &env, &mut rng).unwrap().value).collect();
        assert!(ks_distance(&xs, normal_cdf).unwrap().ks_distance < 1.63 / (20_000f64).sqrt());
    }
}
