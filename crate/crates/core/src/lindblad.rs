//! Open-system dynamics: the Lindblad master equation
//! ρ̇ = i[ρ, H] + ½ ΣΓ_j (2σ_jρσ_j† − σ_j†σ_jρ − ρσ_j†σ_j)
//! integrated with fixed-step RK4 over piecewise-constant Hamiltonian
//! schedules, plus the named decoherence operator sets, state fidelities,
//! and the six-state average gate fidelity.
//!
//! [`lindblad_rhs`] is the readable reference form. [`integrate`] evaluates
//! the same right-hand side through a precomputed sparse-triplet path (jump
//! operators and drive Hamiltonians are mostly zeros); a unit test pins the
//! two forms against each other.

use crate::algebra::ComplexMatrix;
use crate::error::{Error, Result};
use crate::propagator::{hamiltonian_3level, NoiseParams};
use crate::pulses::{build_sequence, target_gate, GateParams, Scheme};
use crate::scalar::{Real, C};
use crate::{HERMITIAN_TOL, TRACE_TOL};

/// Which jump-operator family a simulation uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorSet {
    /// The four three-level channels of [`decoherence_ops_3level`].
    ThreeLevel,
    /// Lowering plus dephasing on every physical qubit of a register,
    /// from [`decoherence_ops_per_qubit`].
    PerQubit,
}

/// Decoherence rates Γ_j (units of the drive amplitude) bound to an
/// operator set. A single rate is broadcast across all channels.
#[derive(Clone, Debug, PartialEq)]
pub struct DecoherenceParams<R> {
    rates: Vec<R>,
    operator_set: OperatorSet,
}

impl<R: Real> DecoherenceParams<R> {
    pub fn new(rates: Vec<R>, operator_set: OperatorSet) -> Result<Self> {
        if rates.is_empty() {
            return Err(Error::InvalidInput("at least one decoherence rate".into()));
        }
        if rates.iter().any(|r| !(*r >= R::zero())) {
            return Err(Error::InvalidInput("decoherence rates must be >= 0".into()));
        }
        Ok(Self { rates, operator_set })
    }

    /// One rate Γ for all four three-level channels.
    pub fn uniform_three_level(gamma: R) -> Result<Self> {
        Self::new(vec![gamma], OperatorSet::ThreeLevel)
    }

    /// One rate Γ for decay and dephasing on every physical qubit.
    pub fn uniform_per_qubit(gamma: R) -> Result<Self> {
        Self::new(vec![gamma], OperatorSet::PerQubit)
    }

    pub fn rates(&self) -> &[R] {
        &self.rates
    }

    pub fn operator_set(&self) -> OperatorSet {
        self.operator_set
    }

    /// Rates per channel: a single stored rate is broadcast, otherwise the
    /// count must match.
    pub fn expanded_rates(&self, channels: usize) -> Result<Vec<R>> {
        if self.rates.len() == 1 {
            Ok(vec![self.rates[0]; channels])
        } else if self.rates.len() == channels {
            Ok(self.rates.clone())
        } else {
            Err(Error::InvalidInput(format!(
                "{} rates for {} channels",
                self.rates.len(),
                channels
            )))
        }
    }
}

/// Piecewise-constant Hamiltonian schedule: (H, duration) in order.
#[derive(Clone, Debug)]
pub struct Schedule<R> {
    steps: Vec<(ComplexMatrix<R>, R)>,
}

impl<R: Real> Schedule<R> {
    pub fn new(steps: Vec<(ComplexMatrix<R>, R)>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::InvalidInput("empty schedule".into()));
        }
        let dim = steps[0].0.rows();
        for (h, dur) in &steps {
            if !h.is_square() || h.rows() != dim {
                return Err(Error::Shape(
                    "schedule Hamiltonians must share one square dimension".into(),
                ));
            }
            if !h.is_hermitian(R::of(HERMITIAN_TOL)) {
                return Err(Error::InvalidInput("schedule Hamiltonian is not Hermitian".into()));
            }
            if !(*dur > R::zero()) {
                return Err(Error::InvalidInput("schedule durations must be > 0".into()));
            }
        }
        Ok(Self { steps })
    }

    /// Schedule of a pulse scheme on the three-level system at unit drive.
    pub fn three_level(
        scheme: Scheme,
        g: &GateParams<R>,
        n: &NoiseParams<R>,
        phi0_base: R,
    ) -> Self {
        let steps = build_sequence(scheme, g, phi0_base)
            .iter()
            .map(|s| (hamiltonian_3level(g, s.phi0, R::one(), n), s.area))
            .collect();
        Self { steps }
    }

    pub fn steps(&self) -> &[(ComplexMatrix<R>, R)] {
        &self.steps
    }

    pub fn dim(&self) -> usize {
        self.steps[0].0.rows()
    }

    pub fn total_duration(&self) -> R {
        self.steps.iter().map(|(_, d)| *d).fold(R::zero(), |a, b| a + b)
    }

    pub fn min_duration(&self) -> R {
        self.steps.iter().map(|(_, d)| *d).fold(R::infinity(), R::min)
    }
}

/// The master-equation right-hand side, written exactly as the dynamics it
/// models: ρ̇ = i[ρ, H] + ½ ΣΓ_j (2σ_jρσ_j† − σ_j†σ_jρ − ρσ_j†σ_j).
pub fn lindblad_rhs<R: Real>(
    rho: &ComplexMatrix<R>,
    h: &ComplexMatrix<R>,
    ops: &[ComplexMatrix<R>],
    rates: &[R],
) -> Result<ComplexMatrix<R>> {
    let dim = rho.rows();
    if !rho.is_square() || !h.is_square() || h.rows() != dim {
        return Err(Error::Shape("rho and h must be square with equal dimension".into()));
    }
    if ops.len() != rates.len() {
        return Err(Error::Shape("one rate per jump operator".into()));
    }
    let i = C::new(R::zero(), R::one());
    let mut out = rho.matmul(h)?.sub(&h.matmul(rho)?)?.scale(i);
    for (sigma, rate) in ops.iter().zip(rates) {
        if !sigma.is_square() || sigma.rows() != dim {
            return Err(Error::Shape("jump operator dimension mismatch".into()));
        }
        let sd = sigma.dagger();
        let sds = sd.matmul(sigma)?;
        let gain = sigma.matmul(rho)?.matmul(&sd)?.scale(C::new(R::of(2.0), R::zero()));
        let loss = sds.matmul(rho)?.add(&rho.matmul(&sds)?)?;
        out = out.add(&gain.sub(&loss)?.scale(C::new(*rate * R::of(0.5), R::zero())))?;
    }
    Ok(out)
}

/// The four three-level decoherence channels in basis (|0⟩, |1⟩, |e⟩):
/// σ₁ = |e⟩⟨0|, σ₂ = |e⟩⟨1|, σ₃ = (|0⟩⟨0| − |e⟩⟨e|)/2, σ₄ = (|1⟩⟨1| − |e⟩⟨e|)/2.
pub fn decoherence_ops_3level<R: Real>() -> Vec<(ComplexMatrix<R>, &'static str)> {
    let one = C::new(R::one(), R::zero());
    let half = C::new(R::of(0.5), R::zero());
    let mut s1 = ComplexMatrix::zeros(3, 3);
    s1[(2, 0)] = one;
    let mut s2 = ComplexMatrix::zeros(3, 3);
    s2[(2, 1)] = one;
    let mut s3 = ComplexMatrix::zeros(3, 3);
    s3[(0, 0)] = half;
    s3[(2, 2)] = -half;
    let mut s4 = ComplexMatrix::zeros(3, 3);
    s4[(1, 1)] = half;
    s4[(2, 2)] = -half;
    vec![(s1, "transfer_0_to_e"), (s2, "transfer_1_to_e"), (s3, "dephase_0e"), (s4, "dephase_1e")]
}

/// Per-qubit channels on an `n_qubits` register (dimension 2^n, qubit 0 is
/// the leftmost tensor factor): for each qubit, lowering |0⟩⟨1| and
/// dephasing (|1⟩⟨1| − |0⟩⟨0|)/2.
pub fn decoherence_ops_per_qubit<R: Real>(n_qubits: usize) -> Vec<(ComplexMatrix<R>, String)> {
    let one = C::new(R::one(), R::zero());
    let half = C::new(R::of(0.5), R::zero());
    let mut lower = ComplexMatrix::zeros(2, 2);
    lower[(0, 1)] = one;
    let mut dephase = ComplexMatrix::zeros(2, 2);
    dephase[(0, 0)] = -half;
    dephase[(1, 1)] = half;
    let mut out = Vec::with_capacity(2 * n_qubits);
    for q in 0..n_qubits {
        for (op, name) in [(&lower, "lower"), (&dephase, "dephase")] {
            let mut full = ComplexMatrix::identity(1);
            for j in 0..n_qubits {
                let factor = if j == q { op.clone() } else { ComplexMatrix::identity(2) };
                full = full.kron(&factor);
            }
            out.push((full, format!("{name}_q{q}")));
        }
    }
    out
}

fn build_ops<R: Real>(
    d: &DecoherenceParams<R>,
    dim: usize,
) -> Result<(Vec<ComplexMatrix<R>>, Vec<R>)> {
    let ops: Vec<ComplexMatrix<R>> = match d.operator_set() {
        OperatorSet::ThreeLevel => {
            if dim != 3 {
                return Err(Error::InvalidInput(format!(
                    "three-level operator set on dimension {dim}"
                )));
            }
            decoherence_ops_3level().into_iter().map(|(op, _)| op).collect()
        }
        OperatorSet::PerQubit => {
            if dim < 2 || !dim.is_power_of_two() {
                return Err(Error::InvalidInput(format!(
                    "per-qubit operator set needs a 2^n dimension, got {dim}"
                )));
            }
            let n_qubits = dim.trailing_zeros() as usize;
            decoherence_ops_per_qubit(n_qubits).into_iter().map(|(op, _)| op).collect()
        }
    };
    let rates = d.expanded_rates(ops.len())?;
    Ok((ops, rates))
}

/// Sparse view of a mostly-zero operator: explicit (row, col, value)
/// entries. Only an internal accelerator; the dense form stays the source
/// of truth.
struct Triplets<R> {
    entries: Vec<(usize, usize, C<R>)>,
}

impl<R: Real> Triplets<R> {
    fn from_matrix(m: &ComplexMatrix<R>) -> Self {
        let zero = C::new(R::zero(), R::zero());
        let mut entries = Vec::new();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if m[(i, j)] != zero {
                    entries.push((i, j, m[(i, j)]));
                }
            }
        }
        Self { entries }
    }

    fn dagger(&self) -> Self {
        Self { entries: self.entries.iter().map(|&(r, c, v)| (c, r, v.conj())).collect() }
    }

    fn scaled(&self, f: C<R>) -> Self {
        Self { entries: self.entries.iter().map(|&(r, c, v)| (r, c, v * f)).collect() }
    }

    /// out += S·ρ
    fn left_mul_into(&self, rho: &ComplexMatrix<R>, out: &mut ComplexMatrix<R>) {
        let n = rho.cols();
        for &(r, c, v) in &self.entries {
            for j in 0..n {
                out[(r, j)] += v * rho[(c, j)];
            }
        }
    }

    /// out += ρ·S
    fn right_mul_into(&self, rho: &ComplexMatrix<R>, out: &mut ComplexMatrix<R>) {
        let n = rho.rows();
        for &(r, c, v) in &self.entries {
            for i in 0..n {
                out[(i, c)] += rho[(i, r)] * v;
            }
        }
    }
}

/// Precomputed right-hand side for one schedule segment:
/// ρ̇ = i(ρH − Hρ) − ½(Kρ + ρK) + ΣΓ_j σ_jρσ_j†, K = ΣΓ_j σ_j†σ_j.
struct SegmentRhs<R> {
    dim: usize,
    h: Triplets<R>,
    half_k: Triplets<R>,
    /// (Γ·σ, σ†) per channel; the rate is folded into the left factor.
    jumps: Vec<(Triplets<R>, Triplets<R>)>,
}

impl<R: Real> SegmentRhs<R> {
    fn new(h: &ComplexMatrix<R>, ops: &[ComplexMatrix<R>], rates: &[R]) -> Self {
        let dim = h.rows();
        let mut k = ComplexMatrix::zeros(dim, dim);
        let mut jumps = Vec::with_capacity(ops.len());
        for (sigma, rate) in ops.iter().zip(rates) {
            let g = C::new(*rate, R::zero());
            k = k.add(&sigma.dagger().matmul(sigma).expect("square").scale(g)).expect("same dim");
            let t = Triplets::from_matrix(sigma);
            let td = t.dagger();
            jumps.push((t.scaled(g), td));
        }
        Self {
            dim,
            h: Triplets::from_matrix(h),
            half_k: Triplets::from_matrix(&k.scale(C::new(R::of(0.5), R::zero()))),
            jumps,
        }
    }

    fn eval(&self, rho: &ComplexMatrix<R>) -> ComplexMatrix<R> {
        let n = self.dim;
        let mut comm = ComplexMatrix::zeros(n, n);
        self.h.right_mul_into(rho, &mut comm); // ρH
        let mut hr = ComplexMatrix::zeros(n, n);
        self.h.left_mul_into(rho, &mut hr); // Hρ
        let mut out = comm.sub(&hr).expect("same dim").scale(C::new(R::zero(), R::one()));

        let mut anti = ComplexMatrix::zeros(n, n);
        self.half_k.left_mul_into(rho, &mut anti);
        self.half_k.right_mul_into(rho, &mut anti);
        out = out.sub(&anti).expect("same dim");

        for (scaled_sigma, sigma_dag) in &self.jumps {
            let mut left = ComplexMatrix::zeros(n, n);
            scaled_sigma.left_mul_into(rho, &mut left); // Γσρ
            sigma_dag.right_mul_into(&left, &mut out); // += Γσρσ†
        }
        out
    }

    fn rk4_step(&self, rho: &ComplexMatrix<R>, h: R) -> ComplexMatrix<R> {
        let rh = |x: R| C::new(x, R::zero());
        let k1 = self.eval(rho);
        let k2 = self.eval(&rho.add(&k1.scale(rh(h * R::of(0.5)))).expect("dim"));
        let k3 = self.eval(&rho.add(&k2.scale(rh(h * R::of(0.5)))).expect("dim"));
        let k4 = self.eval(&rho.add(&k3.scale(rh(h))).expect("dim"));
        let sum = k1
            .add(&k2.scale(rh(R::of(2.0))))
            .and_then(|m| m.add(&k3.scale(rh(R::of(2.0)))))
            .and_then(|m| m.add(&k4))
            .expect("dim");
        rho.add(&sum.scale(rh(h / R::of(6.0)))).expect("dim")
    }

    /// Advances over `span` in ceil(span/step) equal RK4 steps.
    fn advance(&self, rho: &mut ComplexMatrix<R>, span: R, step: R) {
        if !(span > R::zero()) {
            return;
        }
        let n = (span / step).ceil().to_usize().unwrap_or(1).max(1);
        let h = span / R::of(n as f64);
        for _ in 0..n {
            *rho = self.rk4_step(rho, h);
        }
    }
}

fn hermitize<R: Real>(rho: &ComplexMatrix<R>) -> ComplexMatrix<R> {
    rho.add(&rho.dagger()).expect("square").scale(C::new(R::of(0.5), R::zero()))
}

fn validate_initial_state<R: Real>(rho0: &ComplexMatrix<R>, dim: usize) -> Result<()> {
    if !rho0.is_square() || rho0.rows() != dim {
        return Err(Error::Shape(format!(
            "initial state is {}x{}, schedule dimension is {dim}",
            rho0.rows(),
            rho0.cols()
        )));
    }
    if !rho0.is_hermitian(R::of(1e-10)) {
        return Err(Error::InvalidInput("initial state is not Hermitian".into()));
    }
    let tr = rho0.trace();
    if (tr - C::new(R::one(), R::zero())).norm() > R::of(1e-8) {
        return Err(Error::InvalidInput("initial state trace is not 1".into()));
    }
    Ok(())
}

fn validate_step<R: Real>(schedule: &Schedule<R>, step: R) -> Result<()> {
    if !(step > R::zero()) {
        return Err(Error::InvalidInput("integrator step must be > 0".into()));
    }
    if step > schedule.min_duration() {
        return Err(Error::Config(format!(
            "step {:?} exceeds the shortest schedule segment {:?}",
            step,
            schedule.min_duration()
        )));
    }
    Ok(())
}

fn check_trace<R: Real>(rho: &ComplexMatrix<R>) -> Result<()> {
    let drift = (rho.trace() - C::new(R::one(), R::zero())).norm();
    if drift > R::of(TRACE_TOL) {
        return Err(Error::NumericalInvariant(format!("density trace drifted by {:?}", drift)));
    }
    Ok(())
}

/// Fixed-step RK4 integration of the master equation over a schedule.
/// The state is re-Hermitized once, at readout.
pub fn integrate<R: Real>(
    rho0: &ComplexMatrix<R>,
    schedule: &Schedule<R>,
    d: &DecoherenceParams<R>,
    step: R,
) -> Result<ComplexMatrix<R>> {
    let dim = schedule.dim();
    validate_initial_state(rho0, dim)?;
    validate_step(schedule, step)?;
    let (ops, rates) = build_ops(d, dim)?;
    let mut rho = rho0.clone();
    for (h, dur) in schedule.steps() {
        let rhs = SegmentRhs::new(h, &ops, &rates);
        rhs.advance(&mut rho, *dur, step);
    }
    let rho = hermitize(&rho);
    check_trace(&rho)?;
    Ok(rho)
}

/// Populations and running fidelity at one sample time.
#[derive(Clone, Debug, PartialEq)]
pub struct PopulationSample<R> {
    pub time: R,
    /// Diagonal of ρ(t), basis order of the schedule's Hamiltonians.
    pub populations: Vec<R>,
    /// Overlap ⟨ψ_target|ρ(t)|ψ_target⟩.
    pub fidelity: R,
}

/// Integrates the schedule once, reading out populations and the fidelity
/// against `psi_target` at `samples` uniform times (endpoints included).
/// Sample times are hit exactly: the stepper subdivides each inter-sample
/// span instead of overshooting.
pub fn population_trace<R: Real>(
    rho0: &ComplexMatrix<R>,
    schedule: &Schedule<R>,
    d: &DecoherenceParams<R>,
    step: R,
    samples: usize,
    psi_target: &ComplexMatrix<R>,
) -> Result<Vec<PopulationSample<R>>> {
    if samples < 2 {
        return Err(Error::InvalidInput("a trace needs at least 2 samples".into()));
    }
    let dim = schedule.dim();
    validate_initial_state(rho0, dim)?;
    validate_step(schedule, step)?;
    let (ops, rates) = build_ops(d, dim)?;
    let segments: Vec<SegmentRhs<R>> =
        schedule.steps().iter().map(|(h, _)| SegmentRhs::new(h, &ops, &rates)).collect();
    let durations: Vec<R> = schedule.steps().iter().map(|(_, d)| *d).collect();
    let total = schedule.total_duration();
    // Slack below which a remaining span is considered already covered;
    // keeps boundary bookkeeping immune to accumulated rounding.
    let tiny = step * R::of(1e-9);

    let mut rho = rho0.clone();
    let mut seg = 0usize;
    let mut seg_end = durations[0];
    let mut t = R::zero();
    let mut out = Vec::with_capacity(samples);
    for k in 0..samples {
        let target_t = total * R::of(k as f64) / R::of((samples - 1) as f64);
        while target_t - t > tiny {
            while t >= seg_end - tiny && seg + 1 < durations.len() {
                seg += 1;
                seg_end += durations[seg];
            }
            let span = (target_t - t).min(seg_end - t);
            segments[seg].advance(&mut rho, span, step);
            t += span;
        }
        let read = hermitize(&rho);
        check_trace(&read)?;
        out.push(PopulationSample {
            time: target_t,
            populations: (0..dim).map(|i| read[(i, i)].re).collect(),
            fidelity: state_fidelity(&read, psi_target)?,
        });
    }
    Ok(out)
}

/// ⟨ψ|ρ|ψ⟩. A target shorter than ρ's dimension is padded with zero
/// amplitudes on the trailing basis states.
pub fn state_fidelity<R: Real>(rho: &ComplexMatrix<R>, psi_target: &ComplexMatrix<R>) -> Result<R> {
    let dim = rho.rows();
    if !rho.is_square() || psi_target.cols() != 1 || psi_target.rows() > dim {
        return Err(Error::Shape(
            "state_fidelity needs square rho and a column target of no larger dimension".into(),
        ));
    }
    let mut psi = ComplexMatrix::zeros(dim, 1);
    for i in 0..psi_target.rows() {
        psi[(i, 0)] = psi_target[(i, 0)];
    }
    let val = psi.dagger().matmul(&rho.matmul(&psi)?)?[(0, 0)];
    Ok(val.re)
}

/// The six cardinal qubit states used by the average gate fidelity, as 2×1
/// columns: |0⟩, |1⟩, (|0⟩−|1⟩)/√2, (|0⟩+|1⟩)/√2, (|0⟩−i|1⟩)/√2, (|0⟩+i|1⟩)/√2.
pub fn cardinal_states<R: Real>() -> Vec<ComplexMatrix<R>> {
    let z = |re: f64, im: f64| C::new(R::of(re), R::of(im));
    let r = std::f64::consts::FRAC_1_SQRT_2;
    vec![
        ComplexMatrix::column(&[z(1.0, 0.0), z(0.0, 0.0)]),
        ComplexMatrix::column(&[z(0.0, 0.0), z(1.0, 0.0)]),
        ComplexMatrix::column(&[z(r, 0.0), z(-r, 0.0)]),
        ComplexMatrix::column(&[z(r, 0.0), z(r, 0.0)]),
        ComplexMatrix::column(&[z(r, 0.0), z(0.0, -r)]),
        ComplexMatrix::column(&[z(r, 0.0), z(0.0, r)]),
    ]
}

/// Average over the six cardinal initial states of the fidelity between the
/// open-system evolution and the ideal gate (identity on |e⟩).
pub fn avg_gate_fidelity<R: Real>(
    scheme: Scheme,
    g: &GateParams<R>,
    n: &NoiseParams<R>,
    d: &DecoherenceParams<R>,
    step: R,
) -> Result<R> {
    let schedule = Schedule::three_level(scheme, g, n, R::zero());
    let u = target_gate(g);
    let mut sum = R::zero();
    for psi2 in cardinal_states::<R>() {
        let mut psi3 = ComplexMatrix::zeros(3, 1);
        psi3[(0, 0)] = psi2[(0, 0)];
        psi3[(1, 0)] = psi2[(1, 0)];
        let rho0 = psi3.matmul(&psi3.dagger())?;
        let rho_t = integrate(&rho0, &schedule, d, step)?;
        let target = u.matmul(&psi2)?;
        sum += state_fidelity(&rho_t, &target)?;
    }
    Ok(sum / R::of(6.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propagator::evolve_sequence;

    type M = ComplexMatrix<f64>;
    type G = GateParams<f64>;
    type N = NoiseParams<f64>;

    fn z(re: f64, im: f64) -> C<f64> {
        C::new(re, im)
    }

    fn lcg_matrix(n: usize, seed: &mut u64) -> M {
        M::from_fn(n, n, |_, _| {
            let mut next = || {
                *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((*seed >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
            };
            z(next(), next())
        })
    }

    fn random_density(n: usize, seed: &mut u64) -> M {
        let a = lcg_matrix(n, seed);
        let rho = a.matmul(&a.dagger()).unwrap();
        let tr = rho.trace();
        rho.scale(z(1.0, 0.0) / tr)
    }

    fn random_hermitian(n: usize, seed: &mut u64) -> M {
        let a = lcg_matrix(n, seed);
        a.add(&a.dagger()).unwrap().scale(z(0.5, 0.0))
    }

    #[test]
    fn three_level_ops_identities() {
        let ops = decoherence_ops_3level::<f64>();
        assert_eq!(ops.len(), 4);
        let s1 = &ops[0].0;
        let proj0 = s1.dagger().matmul(s1).unwrap();
        let mut want = M::zeros(3, 3);
        want[(0, 0)] = z(1.0, 0.0);
        assert!(proj0.max_abs_diff(&want) < 1e-15);
        let s34 = ops[2].0.add(&ops[3].0).unwrap();
        let mut want = M::zeros(3, 3);
        want[(0, 0)] = z(0.5, 0.0);
        want[(1, 1)] = z(0.5, 0.0);
        want[(2, 2)] = z(-1.0, 0.0);
        assert!(s34.max_abs_diff(&want) < 1e-15);
        for (op, _) in &ops {
            assert!(op.trace().norm() < 1e-15);
        }
    }

    #[test]
    fn per_qubit_ops_shapes() {
        let ops = decoherence_ops_per_qubit::<f64>(3);
        assert_eq!(ops.len(), 6);
        assert!(ops.iter().all(|(op, _)| op.rows() == 8));
        assert_eq!(ops[0].1, "lower_q0");
        assert_eq!(ops[5].1, "dephase_q2");
        // lowering on qubit 1 maps |010⟩ (index 2) to |000⟩ (index 0)
        let state = M::basis_column(8, 2);
        let lowered = ops[2].0.matmul(&state).unwrap();
        assert!((lowered[(0, 0)] - z(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn rhs_reduces_to_commutator_without_damping() {
        let mut seed = 11;
        let rho = random_density(3, &mut seed);
        let h = random_hermitian(3, &mut seed);
        let got = lindblad_rhs(&rho, &h, &[], &[]).unwrap();
        let want =
            rho.matmul(&h).unwrap().sub(&h.matmul(&rho).unwrap()).unwrap().scale(z(0.0, 1.0));
        assert!(got.max_abs_diff(&want) < 1e-15);
        // stationary when [ρ, H] = 0
        let id = M::identity(3).scale(z(1.0 / 3.0, 0.0));
        assert!(lindblad_rhs(&id, &h, &[], &[]).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn rhs_is_traceless() {
        let mut seed = 13;
        let rho = random_density(3, &mut seed);
        let h = random_hermitian(3, &mut seed);
        let ops: Vec<M> = decoherence_ops_3level().into_iter().map(|(o, _)| o).collect();
        let rhs = lindblad_rhs(&rho, &h, &ops, &[3e-4, 2e-4, 1e-4, 4e-4]).unwrap();
        assert!(rhs.trace().norm() < 1e-14);
    }

    // Oracle: each master-equation term evaluated independently with raw
    // index loops, no shared matmul code.
    fn rhs_oracle(rho: &M, h: &M, ops: &[M], rates: &[f64]) -> M {
        let n = rho.rows();
        let mul = |a: &M, b: &M| {
            let mut out = M::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let add = a[(i, k)] * b[(k, j)];
                        out[(i, j)] += add;
                    }
                }
            }
            out
        };
        let mut out = M::zeros(n, n);
        let rh = mul(rho, h);
        let hr = mul(h, rho);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = z(0.0, 1.0) * (rh[(i, j)] - hr[(i, j)]);
            }
        }
        for (s, g) in ops.iter().zip(rates) {
            let sd = s.dagger();
            let srs = mul(&mul(s, rho), &sd);
            let sds = mul(&sd, s);
            let a = mul(&sds, rho);
            let b = mul(rho, &sds);
            for i in 0..n {
                for j in 0..n {
                    let term = srs[(i, j)] * z(2.0, 0.0) - a[(i, j)] - b[(i, j)];
                    out[(i, j)] += term * z(0.5 * g, 0.0);
                }
            }
        }
        out
    }

    #[test]
    fn rhs_matches_term_by_term_oracle() {
        let mut seed = 17;
        let rho = random_density(3, &mut seed);
        let h = random_hermitian(3, &mut seed);
        let ops: Vec<M> = decoherence_ops_3level().into_iter().map(|(o, _)| o).collect();
        let rates = [2e-4, 3e-4, 1e-4, 5e-4];
        let got = lindblad_rhs(&rho, &h, &ops, &rates).unwrap();
        assert!(got.max_abs_diff(&rhs_oracle(&rho, &h, &ops, &rates)) < 1e-13);
    }

    #[test]
    fn fast_path_matches_dense_rhs() {
        let mut seed = 19;
        // three-level set
        let rho = random_density(3, &mut seed);
        let h = random_hermitian(3, &mut seed);
        let ops: Vec<M> = decoherence_ops_3level().into_iter().map(|(o, _)| o).collect();
        let rates = vec![2e-4, 3e-4, 1e-4, 5e-4];
        let fast = SegmentRhs::new(&h, &ops, &rates);
        let dense = lindblad_rhs(&rho, &h, &ops, &rates).unwrap();
        assert!(fast.eval(&rho).max_abs_diff(&dense) < 1e-13);
        // per-qubit set on three qubits
        let rho = random_density(8, &mut seed);
        let h = random_hermitian(8, &mut seed);
        let ops: Vec<M> = decoherence_ops_per_qubit(3).into_iter().map(|(o, _)| o).collect();
        let rates = vec![1e-4; 6];
        let fast = SegmentRhs::new(&h, &ops, &rates);
        let dense = lindblad_rhs(&rho, &h, &ops, &rates).unwrap();
        assert!(fast.eval(&rho).max_abs_diff(&dense) < 1e-13);
    }

    #[test]
    fn pure_decay_channel_matches_exponential() {
        // Only σ₁ = |e⟩⟨0| active: population of |0⟩ obeys d/dt p = −Γp,
        // p(t) = e^{−Γt}; the transferred weight lands on |e⟩.
        let gamma = 0.05;
        let d =
            DecoherenceParams::new(vec![gamma, 0.0, 0.0, 0.0], OperatorSet::ThreeLevel).unwrap();
        let t_total = 4.0;
        let schedule = Schedule::new(vec![(M::zeros(3, 3), t_total)]).unwrap();
        let rho0 =
            M::from_fn(3, 3, |i, j| if i == 0 && j == 0 { z(1.0, 0.0) } else { z(0.0, 0.0) });
        let rho = integrate(&rho0, &schedule, &d, 1e-3).unwrap();
        let want = (-gamma * t_total).exp();
        assert!((rho[(0, 0)].re - want).abs() < 1e-6);
        assert!((rho[(2, 2)].re - (1.0 - want)).abs() < 1e-6);
    }

    #[test]
    fn zero_damping_matches_unitary_conjugation() {
        let g = G::x_half();
        let n = N::new(0.05, 0.0).unwrap();
        let schedule = Schedule::three_level(Scheme::Tlnhqc, &g, &n, 0.0);
        let d = DecoherenceParams::uniform_three_level(0.0).unwrap();
        let psi = M::basis_column(3, 0);
        let rho0 = psi.matmul(&psi.dagger()).unwrap();
        let rho = integrate(&rho0, &schedule, &d, 1e-3).unwrap();
        let u = evolve_sequence(&build_sequence(Scheme::Tlnhqc, &g, 0.0), &g, &n);
        let want = u.matmul(&rho0).unwrap().matmul(&u.dagger()).unwrap();
        assert!(rho.max_abs_diff(&want) < 1e-8);
    }

    #[test]
    fn halving_the_step_changes_nothing_measurable() {
        let g = G::x_half();
        let schedule = Schedule::three_level(Scheme::Opnhqc, &g, &N::zero(), 0.0);
        let d = DecoherenceParams::uniform_three_level(2e-4).unwrap();
        let psi = M::basis_column(3, 0);
        let rho0 = psi.matmul(&psi.dagger()).unwrap();
        let coarse = integrate(&rho0, &schedule, &d, 1e-3).unwrap();
        let fine = integrate(&rho0, &schedule, &d, 5e-4).unwrap();
        assert!(coarse.max_abs_diff(&fine) < 1e-9);
    }

    #[test]
    fn integration_state_stays_physical() {
        let g = G::s_gate();
        let schedule = Schedule::three_level(Scheme::Dcnhqc, &g, &N::zero(), 0.0);
        let d = DecoherenceParams::uniform_three_level(5e-4).unwrap();
        let psi = M::column(&[z(0.6, 0.0), z(0.0, 0.8), z(0.0, 0.0)]);
        let rho0 = psi.matmul(&psi.dagger()).unwrap();
        let rho = integrate(&rho0, &schedule, &d, 1e-3).unwrap();
        assert!((rho.trace().re - 1.0).abs() < 1e-8);
        let (vals, _) = rho.hermitian_eigen().unwrap();
        assert!(vals.into_iter().all(|v| v > -1e-8));
    }

    #[test]
    fn step_validation() {
        let schedule = Schedule::new(vec![(M::zeros(3, 3), 0.5)]).unwrap();
        let d = DecoherenceParams::uniform_three_level(0.0).unwrap();
        let rho0 = M::identity(3).scale(z(1.0 / 3.0, 0.0));
        assert!(matches!(integrate(&rho0, &schedule, &d, 0.6), Err(Error::Config(_))));
        assert!(matches!(integrate(&rho0, &schedule, &d, 0.0), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn state_fidelity_basics() {
        let psi = M::column(&[z(0.6, 0.0), z(0.8, 0.0)]);
        let mut psi3 = M::zeros(3, 1);
        psi3[(0, 0)] = psi[(0, 0)];
        psi3[(1, 0)] = psi[(1, 0)];
        let rho = psi3.matmul(&psi3.dagger()).unwrap();
        assert!((state_fidelity(&rho, &psi).unwrap() - 1.0).abs() < 1e-14);
        let mixed = M::identity(3).scale(z(1.0 / 3.0, 0.0));
        assert!((state_fidelity(&mixed, &psi).unwrap() - 1.0 / 3.0).abs() < 1e-14);
        let too_big = M::zeros(4, 1);
        assert!(state_fidelity(&rho, &too_big).is_err());
    }

    #[test]
    fn population_trace_endpoints() {
        let g = G::x_half();
        let schedule = Schedule::three_level(Scheme::Opnhqc, &g, &N::zero(), 0.0);
        let d = DecoherenceParams::uniform_three_level(0.0).unwrap();
        let psi0 = M::basis_column(3, 0);
        let rho0 = psi0.matmul(&psi0.dagger()).unwrap();
        let target = {
            let u = target_gate(&g);
            let t2 = u.matmul(&M::basis_column(2, 0)).unwrap();
            M::column(&[t2[(0, 0)], t2[(1, 0)], z(0.0, 0.0)])
        };
        let trace = population_trace(&rho0, &schedule, &d, 1e-3, 41, &target).unwrap();
        assert_eq!(trace.len(), 41);
        let first = &trace[0];
        assert!((first.populations[0] - 1.0).abs() < 1e-12);
        assert!(first.populations[1].abs() < 1e-12);
        let last = trace.last().unwrap();
        assert!((last.time - schedule.total_duration()).abs() < 1e-12);
        // cyclic evolution empties the ancilla level and lands on the target
        assert!(last.populations[2] < 1e-8);
        assert!((last.fidelity - 1.0).abs() < 1e-8);
        for s in &trace {
            let total: f64 = s.populations.iter().sum();
            assert!((total - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn frozen_state_fidelity_x_half_under_moderate_damping() {
        let g = G::x_half();
        let schedule = Schedule::three_level(Scheme::Opnhqc, &g, &N::zero(), 0.0);
        let d = DecoherenceParams::uniform_three_level(2e-4).unwrap();
        let psi0 = M::basis_column(3, 0);
        let rho0 = psi0.matmul(&psi0.dagger()).unwrap();
        let rho = integrate(&rho0, &schedule, &d, 1e-3).unwrap();
        let u = target_gate(&g);
        let target = u.matmul(&M::basis_column(2, 0)).unwrap();
        let f = state_fidelity(&rho, &target).unwrap();
        assert!((f - 0.9990).abs() < 3e-4, "got {f}");
    }

    #[test]
    fn gate_fidelity_is_one_without_noise() {
        let f = avg_gate_fidelity(
            Scheme::Opnhqc,
            &G::x_half(),
            &N::zero(),
            &DecoherenceParams::uniform_three_level(0.0).unwrap(),
            1e-3,
        )
        .unwrap();
        assert!((f - 1.0).abs() < 1e-8);
    }

    #[test]
    fn gate_fidelity_decreases_with_damping() {
        let g = G::x_half();
        let mut prev = 1.0 + 1e-12;
        for gamma in [0.0, 2e-4, 5e-4] {
            let f = avg_gate_fidelity(
                Scheme::Opnhqc,
                &g,
                &N::zero(),
                &DecoherenceParams::uniform_three_level(gamma).unwrap(),
                1e-3,
            )
            .unwrap();
            assert!(f < prev, "fidelity must drop as damping grows");
            prev = f;
        }
    }
}
