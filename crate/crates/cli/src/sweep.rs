//! Parameter sweeps: the closed-system amplitude-error sweep and the
//! two-parameter fidelity maps. Grid points run on a worker pool; results
//! are gathered in grid order, so parallelism never changes the output.

use crate::table::Table;
use crate::{HarnessError, Result};
use holonomy::{
    avg_gate_fidelity, build_sequence, computational_block, evolve_sequence, scheme_fidelity,
    target_gate, trace_fidelity, DecoherenceParams, FidelityMode, GateParams, NoiseParams, Scheme,
};
use rayon::prelude::*;

/// Inclusive uniform grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    min: f64,
    max: f64,
    count: usize,
}

impl Grid {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) {
            return Err(HarnessError::Config("grid bounds must be finite".into()));
        }
        if count < 1 {
            return Err(HarnessError::Config("grid count must be at least 1".into()));
        }
        if min > max {
            return Err(HarnessError::Config(format!("grid min {min} exceeds max {max}")));
        }
        Ok(Grid { min, max, count })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let span = self.max - self.min;
        (0..self.count).map(|k| self.min + span * k as f64 / (self.count - 1) as f64).collect()
    }
}

/// Everything a sweep or map run needs. The epsilon grid is always present;
/// at most one of the delta and gamma grids may be.
#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub schemes: Vec<Scheme>,
    pub gate: GateParams<f64>,
    pub phi0: f64,
    pub epsilon: Grid,
    pub delta: Option<Grid>,
    pub gamma: Option<Grid>,
    pub step: f64,
}

impl SweepConfig {
    fn validate(&self) -> Result<()> {
        if self.schemes.is_empty() {
            return Err(HarnessError::Config("no schemes selected".into()));
        }
        if !(self.step > 0.0) {
            return Err(HarnessError::Config("step must be positive".into()));
        }
        Ok(())
    }
}

/// Propagated gate fidelity against the ideal target, restricted to the
/// computational block.
fn numeric_fidelity(
    scheme: Scheme,
    g: &GateParams<f64>,
    phi0: f64,
    n: &NoiseParams<f64>,
) -> Result<f64> {
    let u = evolve_sequence(&build_sequence(scheme, g, phi0), g, n);
    Ok(trace_fidelity(&target_gate(g), &computational_block(&u))?)
}

/// Closed-system sweep over amplitude error: one row per (scheme, ε) with
/// the closed-form and the propagated fidelity. The run aborts with a
/// numerical-invariant error if the two ever disagree beyond 1e-9.
pub fn run_epsilon_sweep(cfg: &SweepConfig) -> Result<Table> {
    cfg.validate()?;
    if cfg.delta.is_some() || cfg.gamma.is_some() {
        return Err(HarnessError::Config(
            "the epsilon sweep is closed-system; secondary grids belong to the map command".into(),
        ));
    }
    let mut points = Vec::new();
    for &s in &cfg.schemes {
        for e in cfg.epsilon.values() {
            points.push((s, e));
        }
    }
    let fids: Vec<(f64, f64)> = points
        .par_iter()
        .map(|&(s, e)| -> Result<(f64, f64)> {
            let exact = scheme_fidelity(s, cfg.gate.gamma_g(), e, FidelityMode::Exact);
            let numeric = numeric_fidelity(s, &cfg.gate, cfg.phi0, &NoiseParams::new(e, 0.0)?)?;
            if (exact - numeric).abs() > holonomy::EQUIV_TOL {
                return Err(HarnessError::Core(holonomy::Error::NumericalInvariant(format!(
                    "closed form and propagation disagree at ({s}, eps={e}): {exact} vs {numeric}"
                ))));
            }
            Ok((exact, numeric))
        })
        .collect::<Result<_>>()?;
    let mut t = Table::new(&["scheme", "epsilon", "fidelity_exact", "fidelity_numeric"]);
    for ((s, e), (exact, numeric)) in points.iter().zip(fids) {
        t.push(vec![s.as_str().into(), (*e).into(), exact.into(), numeric.into()]);
    }
    Ok(t)
}

/// Two-parameter fidelity map. With a gamma grid the fidelity is the
/// Lindblad average gate fidelity over the cardinal states; with a delta
/// grid it is the closed-system propagated fidelity. Rows are emitted
/// scheme-major, then ε, then the secondary axis.
pub fn run_2d_map(cfg: &SweepConfig) -> Result<Table> {
    cfg.validate()?;
    let (second, is_gamma) = match (&cfg.delta, &cfg.gamma) {
        (Some(_), Some(_)) => {
            return Err(HarnessError::Config(
                "set exactly one of the delta and gamma grids, not both".into(),
            ))
        }
        (None, None) => {
            return Err(HarnessError::Config(
                "the map needs a secondary grid: delta (closed-system) or gamma (Lindblad)".into(),
            ))
        }
        (Some(d), None) => (d, false),
        (None, Some(g)) => (g, true),
    };
    let mut points = Vec::new();
    for &s in &cfg.schemes {
        for e in cfg.epsilon.values() {
            for v in second.values() {
                points.push((s, e, v));
            }
        }
    }
    let fids: Vec<f64> = points
        .par_iter()
        .map(|&(s, e, v)| -> Result<f64> {
            if is_gamma {
                let d = DecoherenceParams::uniform_three_level(v)?;
                Ok(avg_gate_fidelity(s, &cfg.gate, &NoiseParams::new(e, 0.0)?, &d, cfg.step)?)
            } else {
                numeric_fidelity(s, &cfg.gate, cfg.phi0, &NoiseParams::new(e, v)?)
            }
        })
        .collect::<Result<_>>()?;
    let axis = if is_gamma { "gamma_rate" } else { "delta" };
    let mut t = Table::new(&["scheme", "epsilon", axis, "fidelity"]);
    for ((s, e, v), fid) in points.iter().zip(fids) {
        t.push(vec![s.as_str().into(), (*e).into(), (*v).into(), fid.into()]);
    }
    Ok(t)
}
