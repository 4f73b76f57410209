//! Command-line front end. Subcommands map one-to-one onto the library
//! pipelines; this file only parses flags, merges them with an optional
//! config file, and turns errors into exit codes (1 usage/config, 2
//! numerical-invariant violation).

use clap::{Args, Parser, Subcommand};
use holonomy::{
    bloch_trajectory, build_sequence, computational_block, evolve_sequence, population_trace,
    simulate_dfs, target_gate, trace_fidelity, DecoherenceParams, DfsLevel, GateParams, Matrix,
    NoiseParams, Schedule, Scheme, TwoQubitParams, C64, STEP_DEFAULT,
};
use holonomy_cli::config::{parse_angle, FileSettings, Resolve};
use holonomy_cli::sweep::{run_2d_map, run_epsilon_sweep, Grid, SweepConfig};
use holonomy_cli::table::{fmt_float, Table};
use holonomy_cli::{presets, HarnessError, Result};
use std::f64::consts::FRAC_PI_2;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "holonomy",
    version,
    about = "Holonomic gate simulator for lambda-type three-level systems"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate one gate under amplitude and detuning errors
    Gate(GateArgs),
    /// Closed-system fidelity sweep over the amplitude error
    Sweep(SweepArgs),
    /// Fidelity map over (epsilon, gamma-rate) or (epsilon, delta)
    Map(MapArgs),
    /// Time-resolved populations and state fidelity under decoherence
    Dynamics(DynamicsArgs),
    /// Decoherence-free-subspace run on one or two logical qubits
    Dfs(DfsArgs),
    /// Bloch-sphere trajectory of the bright-state block
    Traj(TrajArgs),
    /// Named experiment preset with a pass/fail summary
    Preset(PresetArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// key=value config file; flags override file values
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// write the CSV here instead of stdout
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GateFlags {
    /// gate preset, x/2 or s; exclusive with the angle flags
    #[arg(long)]
    gate: Option<String>,
    /// rotation-axis polar angle, pi suffix allowed (e.g. 0.5pi) [default: 0.5pi]
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    /// rotation-axis azimuthal angle [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<String>,
    /// geometric phase of the gate [default: 0.5pi]
    #[arg(long, allow_hyphen_values = true)]
    gamma_g: Option<String>,
}

#[derive(Args)]
struct GateArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    gate: GateFlags,
    /// pulse scheme: nhqc, tlnhqc, dcnhqc or opnhqc [default: opnhqc]
    #[arg(long)]
    scheme: Option<String>,
    /// base phase of the first pulse segment [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    phi0: Option<String>,
    /// relative amplitude error [default: 0]
    #[arg(long, allow_negative_numbers = true)]
    epsilon: Option<f64>,
    /// detuning error [default: 0]
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    gate: GateFlags,
    /// comma-separated schemes, or "all" [default: all]
    #[arg(long)]
    scheme: Option<String>,
    /// base phase of the first pulse segment [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    phi0: Option<String>,
    /// amplitude-error grid lower bound [default: -0.1]
    #[arg(long, allow_negative_numbers = true)]
    epsilon_min: Option<f64>,
    /// amplitude-error grid upper bound [default: 0.1]
    #[arg(long, allow_negative_numbers = true)]
    epsilon_max: Option<f64>,
    /// amplitude-error grid size [default: 41]
    #[arg(long)]
    epsilon_count: Option<usize>,
}

#[derive(Args)]
struct MapArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    gate: GateFlags,
    /// comma-separated schemes, or "all" [default: all]
    #[arg(long)]
    scheme: Option<String>,
    /// base phase of the first pulse segment [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    phi0: Option<String>,
    /// amplitude-error grid lower bound [default: -0.1]
    #[arg(long, allow_negative_numbers = true)]
    epsilon_min: Option<f64>,
    /// amplitude-error grid upper bound [default: 0.1]
    #[arg(long, allow_negative_numbers = true)]
    epsilon_max: Option<f64>,
    /// amplitude-error grid size [default: 11]
    #[arg(long)]
    epsilon_count: Option<usize>,
    /// detuning grid lower bound (closed-system map)
    #[arg(long, allow_negative_numbers = true)]
    delta_min: Option<f64>,
    /// detuning grid upper bound
    #[arg(long, allow_negative_numbers = true)]
    delta_max: Option<f64>,
    /// detuning grid size
    #[arg(long)]
    delta_count: Option<usize>,
    /// decay-rate grid lower bound (Lindblad map)
    #[arg(long, allow_negative_numbers = true)]
    gamma_min: Option<f64>,
    /// decay-rate grid upper bound
    #[arg(long, allow_negative_numbers = true)]
    gamma_max: Option<f64>,
    /// decay-rate grid size
    #[arg(long)]
    gamma_count: Option<usize>,
    /// integrator step [default: 1e-3]
    #[arg(long, allow_negative_numbers = true)]
    step: Option<f64>,
}

#[derive(Args)]
struct DynamicsArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    gate: GateFlags,
    /// pulse scheme [default: opnhqc]
    #[arg(long)]
    scheme: Option<String>,
    /// base phase of the first pulse segment [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    phi0: Option<String>,
    /// relative amplitude error [default: 0]
    #[arg(long, allow_negative_numbers = true)]
    epsilon: Option<f64>,
    /// detuning error [default: 0]
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<f64>,
    /// uniform decoherence rate [default: 2e-4]
    #[arg(long, allow_negative_numbers = true)]
    gamma_rate: Option<f64>,
    /// integrator step [default: 1e-3]
    #[arg(long, allow_negative_numbers = true)]
    step: Option<f64>,
    /// number of readout times [default: 81]
    #[arg(long)]
    samples: Option<usize>,
    /// initial state: 0, 1, plus, minus, plus-i, minus-i [default: 0]
    #[arg(long)]
    initial: Option<String>,
}

#[derive(Args)]
struct DfsArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    gate: GateFlags,
    /// encoded register: single or two [default: single]
    #[arg(long)]
    level: Option<String>,
    /// pulse scheme [default: opnhqc]
    #[arg(long)]
    scheme: Option<String>,
    /// two-qubit drive mixing angle [default: 0.5pi]
    #[arg(long, allow_hyphen_values = true)]
    chi: Option<String>,
    /// two-qubit drive phase difference [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    eta: Option<String>,
    /// relative amplitude error [default: 0]
    #[arg(long, allow_negative_numbers = true)]
    epsilon: Option<f64>,
    /// collective dephasing strength [default: 0]
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<f64>,
    /// per-qubit decoherence rate [default: 2e-4]
    #[arg(long, allow_negative_numbers = true)]
    gamma_rate: Option<f64>,
    /// integrator step [default: 1e-3]
    #[arg(long, allow_negative_numbers = true)]
    step: Option<f64>,
    /// initial logical state; single: 0, 1, plus, ...; two: 00, 01, 10, 11, plus0
    #[arg(long)]
    initial: Option<String>,
}

#[derive(Args)]
struct TrajArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    gate: GateFlags,
    /// pulse scheme [default: opnhqc]
    #[arg(long)]
    scheme: Option<String>,
    /// base phase of the first pulse segment [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    phi0: Option<String>,
    /// relative amplitude error [default: 0]
    #[arg(long, allow_negative_numbers = true)]
    epsilon: Option<f64>,
    /// detuning error [default: 0]
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<f64>,
    /// number of trajectory points [default: 201]
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Args)]
struct PresetArgs {
    /// one of: fig3a, fig3b, fig4a, fig4b, fig5, fig6, fig7, cnot-check, order-scaling
    name: String,
    #[command(flatten)]
    common: CommonArgs,
    /// integrator step for the presets that integrate [default: 1e-3]
    #[arg(long, allow_negative_numbers = true)]
    step: Option<f64>,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = i32::from(!matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ));
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = dispatch(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Gate(a) => cmd_gate(a),
        Cmd::Sweep(a) => cmd_sweep(a),
        Cmd::Map(a) => cmd_map(a),
        Cmd::Dynamics(a) => cmd_dynamics(a),
        Cmd::Dfs(a) => cmd_dfs(a),
        Cmd::Traj(a) => cmd_traj(a),
        Cmd::Preset(a) => cmd_preset(a),
    }
}

fn load_settings(common: &CommonArgs) -> Result<Option<FileSettings>> {
    common.config.as_deref().map(FileSettings::load).transpose()
}

fn gate_preset(name: &str) -> Result<GateParams<f64>> {
    match name.to_ascii_lowercase().as_str() {
        "x/2" | "x2" | "xhalf" | "x-half" | "x_half" => Ok(GateParams::x_half()),
        "s" => Ok(GateParams::s_gate()),
        other => {
            Err(HarnessError::Config(format!("unknown gate preset {other:?}; expected x/2 or s")))
        }
    }
}

/// A preset name and explicit angles are mutually exclusive per source;
/// command-line angles shadow a file-level preset.
fn gate_params(r: &Resolve, f: &GateFlags) -> Result<GateParams<f64>> {
    let flag_angles = f.theta.is_some() || f.phi.is_some() || f.gamma_g.is_some();
    if f.gate.is_some() && flag_angles {
        return Err(HarnessError::Config(
            "--gate and the explicit angle flags are mutually exclusive".into(),
        ));
    }
    if let Some(name) = f.gate.as_deref() {
        return gate_preset(name);
    }
    let file_theta = r.angle_opt(None, "theta")?;
    let file_phi = r.angle_opt(None, "phi")?;
    let file_gamma = r.angle_opt(None, "gamma_g")?;
    if !flag_angles {
        if let Some(name) = r.string_opt(None, "gate") {
            if file_theta.is_some() || file_phi.is_some() || file_gamma.is_some() {
                return Err(HarnessError::Config(
                    "config file sets both gate and explicit angles".into(),
                ));
            }
            return gate_preset(&name);
        }
    }
    let theta = match f.theta.as_deref() {
        Some(v) => parse_angle(v)?,
        None => file_theta.unwrap_or(FRAC_PI_2),
    };
    let phi = match f.phi.as_deref() {
        Some(v) => parse_angle(v)?,
        None => file_phi.unwrap_or(0.0),
    };
    let gamma_g = match f.gamma_g.as_deref() {
        Some(v) => parse_angle(v)?,
        None => file_gamma.unwrap_or(FRAC_PI_2),
    };
    Ok(GateParams::new(theta, phi, gamma_g)?)
}

fn one_scheme(r: &Resolve, flag: Option<&str>) -> Result<Scheme> {
    Ok(r.string(flag, "scheme", "opnhqc").parse::<Scheme>()?)
}

fn scheme_list(r: &Resolve, flag: Option<&str>) -> Result<Vec<Scheme>> {
    let list = r.string(flag, "scheme", "all");
    if list.trim().eq_ignore_ascii_case("all") {
        return Ok(Scheme::ALL.to_vec());
    }
    list.split(',').map(|s| Ok(s.trim().parse::<Scheme>()?)).collect()
}

fn epsilon_grid(
    r: &Resolve,
    min: Option<f64>,
    max: Option<f64>,
    count: Option<usize>,
    default_count: usize,
) -> Result<Grid> {
    Grid::new(
        r.float(min, "epsilon_min", -0.1)?,
        r.float(max, "epsilon_max", 0.1)?,
        r.count(count, "epsilon_count", default_count)?,
    )
}

fn optional_grid(
    r: &Resolve,
    min: Option<f64>,
    max: Option<f64>,
    count: Option<usize>,
    prefix: &str,
) -> Result<Option<Grid>> {
    let min = r.float_opt(min, &format!("{prefix}_min"))?;
    let max = r.float_opt(max, &format!("{prefix}_max"))?;
    let count = r.count_opt(count, &format!("{prefix}_count"))?;
    match (min, max, count) {
        (None, None, None) => Ok(None),
        (Some(a), Some(b), Some(c)) => Ok(Some(Grid::new(a, b, c)?)),
        _ => Err(HarnessError::Config(format!(
            "the {prefix} grid needs all of --{prefix}-min, --{prefix}-max, --{prefix}-count"
        ))),
    }
}

fn out_path(r: &Resolve, flag: &Option<PathBuf>) -> Option<PathBuf> {
    flag.clone().or_else(|| r.string_opt(None, "out").map(PathBuf::from))
}

fn write_table(t: &Table, out: Option<&PathBuf>) -> Result<()> {
    t.write(out.map(PathBuf::as_path))?;
    if let Some(p) = out {
        println!("wrote {} ({} rows)", p.display(), t.len());
    }
    Ok(())
}

fn qubit_state(token: &str) -> Result<Matrix> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let (a, b) = match token.to_ascii_lowercase().as_str() {
        "0" => ((1.0, 0.0), (0.0, 0.0)),
        "1" => ((0.0, 0.0), (1.0, 0.0)),
        "plus" => ((r, 0.0), (r, 0.0)),
        "minus" => ((r, 0.0), (-r, 0.0)),
        "plus-i" => ((r, 0.0), (0.0, r)),
        "minus-i" => ((r, 0.0), (0.0, -r)),
        other => {
            return Err(HarnessError::Config(format!(
                "unknown initial state {other:?}; expected 0, 1, plus, minus, plus-i, minus-i"
            )))
        }
    };
    Ok(Matrix::column(&[C64::new(a.0, a.1), C64::new(b.0, b.1)]))
}

fn two_qubit_state(token: &str) -> Result<Matrix> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let amps = match token.to_ascii_lowercase().as_str() {
        "00" => [1.0, 0.0, 0.0, 0.0],
        "01" => [0.0, 1.0, 0.0, 0.0],
        "10" => [0.0, 0.0, 1.0, 0.0],
        "11" => [0.0, 0.0, 0.0, 1.0],
        "plus0" => [r, 0.0, r, 0.0],
        other => {
            return Err(HarnessError::Config(format!(
                "unknown initial state {other:?}; expected 00, 01, 10, 11, plus0"
            )))
        }
    };
    Ok(Matrix::column(&amps.map(|x| C64::new(x, 0.0))))
}

fn cmd_gate(a: GateArgs) -> Result<()> {
    let file = load_settings(&a.common)?;
    let r = Resolve { file: file.as_ref() };
    let g = gate_params(&r, &a.gate)?;
    let scheme = one_scheme(&r, a.scheme.as_deref())?;
    let phi0 = r.angle(a.phi0.as_deref(), "phi0", 0.0)?;
    let eps = r.float(a.epsilon, "epsilon", 0.0)?;
    let delta = r.float(a.delta, "delta", 0.0)?;
    let n = NoiseParams::new(eps, delta)?;
    let u = evolve_sequence(&build_sequence(scheme, &g, phi0), &g, &n);
    let fid = trace_fidelity(&target_gate(&g), &computational_block(&u))?;
    let mut t =
        Table::new(&["scheme", "theta", "phi", "gamma_g", "phi0", "epsilon", "delta", "fidelity"]);
    t.push(vec![
        scheme.as_str().into(),
        g.theta().into(),
        g.phi().into(),
        g.gamma_g().into(),
        phi0.into(),
        eps.into(),
        delta.into(),
        fid.into(),
    ]);
    let out = out_path(&r, &a.common.out);
    if out.is_some() {
        println!("fidelity {}", fmt_float(fid));
    }
    write_table(&t, out.as_ref())
}

fn cmd_sweep(a: SweepArgs) -> Result<()> {
    let file = load_settings(&a.common)?;
    let r = Resolve { file: file.as_ref() };
    let cfg = SweepConfig {
        schemes: scheme_list(&r, a.scheme.as_deref())?,
        gate: gate_params(&r, &a.gate)?,
        phi0: r.angle(a.phi0.as_deref(), "phi0", 0.0)?,
        epsilon: epsilon_grid(&r, a.epsilon_min, a.epsilon_max, a.epsilon_count, 41)?,
        delta: None,
        gamma: None,
        step: STEP_DEFAULT,
    };
    let t = run_epsilon_sweep(&cfg)?;
    write_table(&t, out_path(&r, &a.common.out).as_ref())
}

fn cmd_map(a: MapArgs) -> Result<()> {
    let file = load_settings(&a.common)?;
    let r = Resolve { file: file.as_ref() };
    let cfg = SweepConfig {
        schemes: scheme_list(&r, a.scheme.as_deref())?,
        gate: gate_params(&r, &a.gate)?,
        phi0: r.angle(a.phi0.as_deref(), "phi0", 0.0)?,
        epsilon: epsilon_grid(&r, a.epsilon_min, a.epsilon_max, a.epsilon_count, 11)?,
        delta: optional_grid(&r, a.delta_min, a.delta_max, a.delta_count, "delta")?,
        gamma: optional_grid(&r, a.gamma_min, a.gamma_max, a.gamma_count, "gamma")?,
        step: r.float(a.step, "step", STEP_DEFAULT)?,
    };
    let t = run_2d_map(&cfg)?;
    write_table(&t, out_path(&r, &a.common.out).as_ref())
}

fn cmd_dynamics(a: DynamicsArgs) -> Result<()> {
    let file = load_settings(&a.common)?;
    let r = Resolve { file: file.as_ref() };
    let g = gate_params(&r, &a.gate)?;
    let scheme = one_scheme(&r, a.scheme.as_deref())?;
    let phi0 = r.angle(a.phi0.as_deref(), "phi0", 0.0)?;
    let n = NoiseParams::new(r.float(a.epsilon, "epsilon", 0.0)?, r.float(a.delta, "delta", 0.0)?)?;
    let d = DecoherenceParams::uniform_three_level(r.float(a.gamma_rate, "gamma_rate", 2e-4)?)?;
    let step = r.float(a.step, "step", STEP_DEFAULT)?;
    let samples = r.count(a.samples, "samples", 81)?;
    let psi2 = qubit_state(&r.string(a.initial.as_deref(), "initial", "0"))?;

    let schedule = Schedule::three_level(scheme, &g, &n, phi0);
    let mut psi3 = Matrix::zeros(3, 1);
    psi3[(0, 0)] = psi2[(0, 0)];
    psi3[(1, 0)] = psi2[(1, 0)];
    let rho0 = psi3.matmul(&psi3.dagger())?;
    let target = target_gate(&g).matmul(&psi2)?;
    let trace = population_trace(&rho0, &schedule, &d, step, samples, &target)?;

    let mut t = Table::new(&["time", "pop_0", "pop_1", "pop_e", "fidelity"]);
    for s in &trace {
        t.push(vec![
            s.time.into(),
            s.populations[0].into(),
            s.populations[1].into(),
            s.populations[2].into(),
            s.fidelity.into(),
        ]);
    }
    let out = out_path(&r, &a.common.out);
    if out.is_some() {
        println!("final fidelity {}", fmt_float(trace.last().unwrap().fidelity));
    }
    write_table(&t, out.as_ref())
}

fn cmd_dfs(a: DfsArgs) -> Result<()> {
    let file = load_settings(&a.common)?;
    let r = Resolve { file: file.as_ref() };
    let level_name = r.string(a.level.as_deref(), "level", "single");
    let scheme = one_scheme(&r, a.scheme.as_deref())?;
    let n = NoiseParams::new(r.float(a.epsilon, "epsilon", 0.0)?, r.float(a.delta, "delta", 0.0)?)?;
    let d = DecoherenceParams::uniform_per_qubit(r.float(a.gamma_rate, "gamma_rate", 2e-4)?)?;
    let step = r.float(a.step, "step", STEP_DEFAULT)?;
    let initial = r.string_opt(a.initial.as_deref(), "initial");

    let level = match level_name.to_ascii_lowercase().as_str() {
        "single" => DfsLevel::Single {
            gate: gate_params(&r, &a.gate)?,
            initial: qubit_state(initial.as_deref().unwrap_or("0"))?,
        },
        "two" => {
            if a.gate.gate.is_some() || a.gate.theta.is_some() || a.gate.phi.is_some() {
                return Err(HarnessError::Config(
                    "the two-qubit gate takes --chi/--eta/--gamma-g, not --gate/--theta/--phi"
                        .into(),
                ));
            }
            let chi = r.angle(a.chi.as_deref(), "chi", FRAC_PI_2)?;
            let eta = r.angle(a.eta.as_deref(), "eta", 0.0)?;
            let gamma_g = r.angle(a.gate.gamma_g.as_deref(), "gamma_g", FRAC_PI_2)?;
            DfsLevel::Two {
                params: TwoQubitParams::with_eta(chi, eta, gamma_g)?,
                initial: two_qubit_state(initial.as_deref().unwrap_or("plus0"))?,
            }
        }
        other => {
            return Err(HarnessError::Config(format!(
                "unknown level {other:?}; expected single or two"
            )))
        }
    };
    let report = simulate_dfs(&level, scheme, &n, &d, step)?;

    let mut t = Table::new(&["level", "scheme", "fidelity", "leakage", "trace_error", "model"]);
    t.push(vec![
        level_name.into(),
        scheme.as_str().into(),
        report.fidelity.into(),
        report.leakage.into(),
        report.trace_error.into(),
        report.model.clone().into(),
    ]);
    let out = out_path(&r, &a.common.out);
    if out.is_some() {
        println!("fidelity {}", fmt_float(report.fidelity));
        println!("leakage {}", fmt_float(report.leakage));
        println!("model: {}", report.model);
    }
    write_table(&t, out.as_ref())
}

fn cmd_traj(a: TrajArgs) -> Result<()> {
    let file = load_settings(&a.common)?;
    let r = Resolve { file: file.as_ref() };
    let g = gate_params(&r, &a.gate)?;
    let scheme = one_scheme(&r, a.scheme.as_deref())?;
    let phi0 = r.angle(a.phi0.as_deref(), "phi0", 0.0)?;
    let n = NoiseParams::new(r.float(a.epsilon, "epsilon", 0.0)?, r.float(a.delta, "delta", 0.0)?)?;
    let samples = r.count(a.samples, "samples", 201)?;
    if samples < 2 {
        return Err(HarnessError::Config("a trajectory needs at least 2 samples".into()));
    }
    let segments = build_sequence(scheme, &g, phi0);
    let total: f64 = segments.iter().map(|s| s.area).sum();
    let points = bloch_trajectory(&segments, &g, &n, samples);

    let mut t = Table::new(&["time", "x", "y", "z"]);
    for (k, p) in points.iter().enumerate() {
        let time = total * k as f64 / (samples - 1) as f64;
        t.push(vec![time.into(), p[0].into(), p[1].into(), p[2].into()]);
    }
    write_table(&t, out_path(&r, &a.common.out).as_ref())
}

fn cmd_preset(a: PresetArgs) -> Result<()> {
    let file = load_settings(&a.common)?;
    let r = Resolve { file: file.as_ref() };
    let step = r.float(a.step, "step", STEP_DEFAULT)?;
    let outcome = presets::run_preset(&a.name, step)?;
    let path = out_path(&r, &a.common.out)
        .unwrap_or_else(|| PathBuf::from(format!("{}.csv", outcome.name)));
    std::fs::write(&path, outcome.table.emit())?;
    print!("{}", outcome.summary);
    println!("wrote {} ({} rows)", path.display(), outcome.table.len());
    Ok(())
}
