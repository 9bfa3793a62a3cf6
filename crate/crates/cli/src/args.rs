use clap::{Args, Parser, Subcommand, ValueEnum};
use etaue::bessel::DensityMethod;
use etaue::{EnsembleParams, Symmetry};

#[derive(Debug, Parser)]
#[command(name = "etaue", version, about = "2x2 invariant ensembles with a tunable Dyson index")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectral density on a grid
    Density(CurveArgs),
    /// Gap (spacing) density on a grid
    Spacing(CurveArgs),
    /// Entry marginals p1, p2, p3 of the Gaussian weight
    Marginal(MarginalArgs),
    /// Seeded Monte Carlo run: raw samples plus a JSON summary
    Sample(SampleArgs),
    /// Compare the unitary eta jpd with its real-symmetric twin at 2 eta - 1
    TwinCheck(TwinArgs),
    /// Run the invariant battery and write a JSON report
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightArg {
    Gaussian,
    Bessel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SymmetryArg {
    Unitary,
    Real,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Direct,
    Reduced,
}

impl From<MethodArg> for DensityMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Direct => DensityMethod::Direct,
            MethodArg::Reduced => DensityMethod::Reduced,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fault {
    /// Double the Gaussian-weight normalization constant
    Knorm,
}

/// `lo:hi:n` with `lo < hi` and `n >= 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Grid {
    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.lo + (self.hi - self.lo) * i as f64 / (self.n - 1) as f64)
    }
}

pub fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected lo:hi:n, got '{s}'"));
    }
    let lo: f64 = parts[0].parse().map_err(|_| format!("bad lower bound '{}'", parts[0]))?;
    let hi: f64 = parts[1].parse().map_err(|_| format!("bad upper bound '{}'", parts[1]))?;
    let n: usize = parts[2].parse().map_err(|_| format!("bad point count '{}'", parts[2]))?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(format!("grid needs finite lo < hi, got {lo}:{hi}"));
    }
    if n < 2 {
        return Err(format!("grid needs at least 2 points, got {n}"));
    }
    Ok(Grid { lo, hi, n })
}

/// `lo:hi` with `lo < hi`.
pub fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, got '{s}'"))?;
    let lo: f64 = a.parse().map_err(|_| format!("bad lower bound '{a}'"))?;
    let hi: f64 = b.parse().map_err(|_| format!("bad upper bound '{b}'"))?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(format!("range needs finite lo < hi, got {lo}:{hi}"));
    }
    Ok((lo, hi))
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum, default_value = "gaussian")]
    pub weight: WeightArg,
    /// Ensemble parameter; the real-symmetric twin takes eta-hat here
    #[arg(long, allow_negative_numbers = true)]
    pub eta: f64,
    /// Scale of the Bessel weight
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Matrix symmetry class (Gaussian weight only)
    #[arg(long, value_enum, default_value = "unitary")]
    pub symmetry: SymmetryArg,
}

impl ModelArgs {
    pub fn params(&self) -> EnsembleParams {
        match (self.weight, self.symmetry) {
            (WeightArg::Gaussian, SymmetryArg::Unitary) => EnsembleParams::gaussian(self.eta),
            (WeightArg::Gaussian, SymmetryArg::Real) => EnsembleParams::gaussian_real(self.eta),
            (WeightArg::Bessel, s) => {
                let mut p = EnsembleParams::bessel(self.eta, self.alpha);
                if s == SymmetryArg::Real {
                    p.symmetry = Symmetry::RealSymmetric;
                }
                p
            }
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; defaults to $ETAUE_OUT_DIR/<command>.<ext>, else standard output
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Abscissa grid as lo:hi:n
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub grid: Option<Grid>,
    /// Bessel spectral density evaluation
    #[arg(long, value_enum, default_value = "direct")]
    pub method: MethodArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct MarginalArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub eta: f64,
    /// 1: p1(x); 2: p2(x, y); 3: p3(x, y, t); x runs over the grid
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub order: u8,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub y: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub t: f64,
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true, default_value = "-5:5:201")]
    pub grid: Grid,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Number of matrices
    #[arg(long, default_value_t = 75_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 60, value_parser = clap::value_parser!(u64).range(1..))]
    pub bins: u64,
    /// Eigenvalue histogram range lo:hi; spacings use 0:(hi-lo)
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true, default_value = "-6:6")]
    pub range: (f64, f64),
    /// Worker threads; the output does not depend on this
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TwinArgs {
    /// Unitary eta in [1/2, 1]
    #[arg(long, allow_negative_numbers = true)]
    pub eta: f64,
    /// Grid used for both eigenvalues
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true, default_value = "-4:4:41")]
    pub grid: Grid,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    /// Restrict the battery to one weight; both by default
    #[arg(long, value_enum)]
    pub weight: Option<WeightArg>,
    /// Deliberately break the model to check that the battery notices
    #[arg(long, value_enum)]
    pub inject_fault: Option<Fault>,
    /// Report file; defaults to $ETAUE_OUT_DIR/validate.json, else standard output
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        let g = parse_grid("-4:4:401").unwrap();
        assert_eq!((g.lo, g.hi, g.n), (-4.0, 4.0, 401));
        let p: Vec<f64> = parse_grid("0:1:3").unwrap().points().collect();
        assert_eq!(p, vec![0.0, 0.5, 1.0]);
        assert!(parse_grid("1:0:5").is_err());
        assert!(parse_grid("0:1:1").is_err());
        assert!(parse_grid("0:1").is_err());
        assert_eq!(parse_range("-6:6").unwrap(), (-6.0, 6.0));
        assert!(parse_range("6:-6").is_err());
    }
}
