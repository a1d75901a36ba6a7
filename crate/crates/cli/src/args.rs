use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use randers::isometry::IsometryMap;
use randers::{ModelId, ModelKind, Vec2};

#[derive(Parser, Debug)]
#[command(name = "randers", version, about = "Funk, Finsler-Poincaré disk and half-plane Randers models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate F, α, β and the Randers bound at one tangent vector.
    Eval(EvalArgs),
    /// Push a point and a tangent vector through one of the six maps.
    Map(MapArgs),
    /// Volume density at a point, by indicatrix quadrature and closed form.
    Density(DensityArgs),
    /// Seeded sweep of the isometry and composition identities.
    Verify(VerifyArgs),
    /// Plot the unit ball at a point as SVG.
    Indicatrix(IndicatrixArgs),
    /// Minimized Rayleigh quotients along a truncation schedule.
    Gap(GapArgs),
    /// Forward and reverse distance estimates between two points.
    Distance(DistanceArgs),
}

#[derive(Args, Debug, Clone, Copy)]
pub struct ModelArgs {
    /// funk, pdisk or hplane.
    #[arg(long)]
    pub model: ModelKind,
    /// Drop β and use the Riemannian counterpart.
    #[arg(long)]
    pub reversible: bool,
}

impl ModelArgs {
    pub fn id(&self) -> ModelId {
        ModelId { kind: self.model, reversible: self.reversible }
    }
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pub point: Vec2,
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pub vector: Vec2,
}

#[derive(Args, Debug)]
pub struct MapArgs {
    /// f, f_inv, g, g_inv, h or h_inv.
    #[arg(long)]
    pub map: IsometryMap,
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pub point: Vec2,
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true, default_value = "1,0")]
    pub vector: Vec2,
}

#[derive(Args, Debug)]
pub struct DensityArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pub point: Vec2,
    /// Angular nodes of the indicatrix quadrature.
    #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u32).range(16..))]
    pub nodes: u32,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest |x| of disk samples.
    #[arg(long, default_value_t = 0.99)]
    pub truncation: f64,
    /// Half-plane samples use x₂ ∈ [band, 1/band], |x₁| ≤ 1/band.
    #[arg(long, default_value_t = 0.01)]
    pub band: f64,
    /// Tolerance on the relative metric errors.
    #[arg(long, default_value_t = 1e-11)]
    pub tol: f64,
    /// Tolerance on the absolute composition discrepancies.
    #[arg(long, default_value_t = 1e-12)]
    pub comp_tol: f64,
    /// Evaluate in plain double precision instead of double-double.
    #[arg(long)]
    pub double: bool,
    #[arg(long, default_value = "verify.csv")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct IndicatrixArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pub point: Vec2,
    #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u32).range(64..))]
    pub nodes: u32,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct GapArgs {
    #[arg(long, value_delimiter = ',', default_value = "funk,pdisk,hplane")]
    pub models: Vec<ModelKind>,
    #[arg(long, value_delimiter = ',', default_value = "0.9,0.99,0.999")]
    pub truncations: Vec<f64>,
    /// Mesh size of the finest level.
    #[arg(long, default_value_t = 0.02)]
    pub h: f64,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Iteration budget of every descent.
    #[arg(long, default_value_t = 500)]
    pub iters: usize,
    /// Number of mesh levels, coarsest at h·2^(levels−1).
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..=8))]
    pub levels: u32,
    /// Write the table here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DistanceArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pub from: Vec2,
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pub to: Vec2,
    /// Free vertices of the polyline.
    #[arg(long, default_value_t = 8)]
    pub control: usize,
    #[arg(long, default_value_t = 200)]
    pub iters: usize,
}

fn parse_pair(s: &str) -> Result<Vec2, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected two comma-separated numbers, got {s:?}"));
    }
    let num = |t: &str| {
        let v: f64 = t.trim().parse().map_err(|e| format!("{t:?}: {e}"))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("{t:?} is not finite"))
        }
    };
    Ok(Vec2::new(num(parts[0])?, num(parts[1])?))
}
