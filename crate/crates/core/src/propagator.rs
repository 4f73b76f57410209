//! Closed-system propagation: three-level Hamiltonians with X/Z control
//! errors, segment-product unitaries, the closed-form dressed-basis error
//! amplitudes for all four schemes, and the exact/series gate fidelities
//! they imply.
//!
//! Basis order is (|0⟩, |1⟩, |e⟩) everywhere. Gate comparisons go through
//! `trace_fidelity`, never entry-wise equality, because the ideal gate
//! carries a global phase e^{iγ_g/2}.

use crate::algebra::{expm_generator, ComplexMatrix};
use crate::error::{Error, Result};
use crate::pulses::{bright_dark_basis, GateParams, PulseSegment, Scheme};
use crate::scalar::{phase, Real, C};

/// Control-error parameters: ε scales the full drive (X error), δ detunes
/// the excited level in units of the drive amplitude (Z error).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseParams<R> {
    epsilon: R,
    delta: R,
}

impl<R: Real> NoiseParams<R> {
    /// Bounds |ε| ≤ 0.5 and |δ| ≤ 0.5 keep the model in its perturbative
    /// regime; sweeps stay within ±0.1.
    pub fn new(epsilon: R, delta: R) -> Result<Self> {
        let cap = R::of(0.5);
        if !(epsilon.abs() <= cap) || !(delta.abs() <= cap) {
            return Err(Error::InvalidInput(format!(
                "|epsilon| and |delta| must be at most 0.5, got {:?}, {:?}",
                epsilon, delta
            )));
        }
        Ok(Self { epsilon, delta })
    }

    pub fn zero() -> Self {
        Self { epsilon: R::zero(), delta: R::zero() }
    }

    pub fn epsilon(&self) -> R {
        self.epsilon
    }

    pub fn delta(&self) -> R {
        self.delta
    }

    /// Scaled drive strength μ = 1 + ε.
    pub fn mu(&self) -> R {
        R::one() + self.epsilon
    }
}

/// Drive Hamiltonian in basis (|0⟩, |1⟩, |e⟩):
/// (1+ε)[Ω₀ e^{−iφ₀}|0⟩⟨e| + Ω₁ e^{−iφ₁}|1⟩⟨e| + H.c.] + δ·Ω·|e⟩⟨e|
/// with Ω₀ = Ω sin(θ/2), Ω₁ = Ω cos(θ/2), φ₁ = φ₀ + π − φ.
pub fn hamiltonian_3level<R: Real>(
    g: &GateParams<R>,
    phi0: R,
    omega: R,
    n: &NoiseParams<R>,
) -> ComplexMatrix<R> {
    debug_assert!(omega > R::zero());
    let half = g.theta() * R::of(0.5);
    let mu = n.mu();
    let c0 = C::new(mu * omega * half.sin(), R::zero()) * phase(-phi0);
    let phi1 = phi0 + R::PI() - g.phi();
    let c1 = C::new(mu * omega * half.cos(), R::zero()) * phase(-phi1);
    let mut h = ComplexMatrix::zeros(3, 3);
    h[(0, 2)] = c0;
    h[(2, 0)] = c0.conj();
    h[(1, 2)] = c1;
    h[(2, 1)] = c1.conj();
    h[(2, 2)] = C::new(n.delta() * omega, R::zero());
    h
}

/// Product of per-segment propagators, later segments applied on the left.
/// Unit drive amplitude, so each segment runs for its area.
pub fn evolve_sequence<R: Real>(
    segments: &[PulseSegment<R>],
    g: &GateParams<R>,
    n: &NoiseParams<R>,
) -> ComplexMatrix<R> {
    debug_assert!(!segments.is_empty());
    let mut u = ComplexMatrix::identity(3);
    for s in segments {
        let h = hamiltonian_3level(g, s.phi0, R::one(), n);
        let step = expm_generator(&h, s.area).expect("Hermitian by construction");
        u = &step * &u;
    }
    u
}

/// Restriction of a 3×3 unitary to the computational span {|0⟩, |1⟩}.
pub fn computational_block<R: Real>(u: &ComplexMatrix<R>) -> ComplexMatrix<R> {
    ComplexMatrix::from_fn(2, 2, |i, j| u[(i, j)])
}

fn embed3<R: Real>(v2: &ComplexMatrix<R>) -> ComplexMatrix<R> {
    ComplexMatrix::column(&[v2[(0, 0)], v2[(1, 0)], C::new(R::zero(), R::zero())])
}

/// ⟨b|U|b⟩ for the bright state of `g` embedded in the three-level space.
pub fn bright_amplitude<R: Real>(u: &ComplexMatrix<R>, g: &GateParams<R>) -> C<R> {
    let (b, _) = bright_dark_basis(g);
    let b3 = embed3(&b);
    b3.dagger().matmul(&u.matmul(&b3).expect("3x1")).expect("1x1")[(0, 0)]
}

/// ⟨d|U|d⟩ for the dark state of `g` embedded in the three-level space.
pub fn dark_amplitude<R: Real>(u: &ComplexMatrix<R>, g: &GateParams<R>) -> C<R> {
    let (_, d) = bright_dark_basis(g);
    let d3 = embed3(&d);
    d3.dagger().matmul(&u.matmul(&d3).expect("3x1")).expect("1x1")[(0, 0)]
}

/// Closed-form coefficient of |b⟩⟨b| in a scheme's error operator at drive
/// scale μ = 1 + ε. At ε = 0 every scheme collapses to e^{iγ_g}.
pub fn dressed_error_amplitude<R: Real>(scheme: Scheme, gamma_g: R, epsilon: R) -> C<R> {
    let mu = R::one() + epsilon;
    let half_pi = R::FRAC_PI_2();
    let (s_h, c_h) = (mu * half_pi).sin_cos(); // sin/cos of μπ/2
    let s_full = (mu * R::PI()).sin(); // sin of μπ
    let eig = phase(gamma_g);
    let re = |x: R| C::new(x, R::zero());
    let quarter = R::of(0.25);
    match scheme {
        Scheme::Nhqc => re(c_h * c_h) + re(s_h * s_h) * eig,
        Scheme::Opnhqc => {
            let paren =
                re(c_h.powi(4)) * phase(-gamma_g * R::of(0.5)) + re(quarter * s_full * s_full);
            let two_i = C::new(R::zero(), R::of(2.0));
            eig - two_i * eig * re((gamma_g * R::of(0.5)).sin()) * paren
        }
        Scheme::Tlnhqc => {
            let half_g = gamma_g * R::of(0.5);
            re(R::of(0.5) * s_full * s_full) * (re(half_g.cos()) + phase(half_g))
                + re(s_h.powi(4)) * eig
                + re(c_h * c_h * (R::one() - R::of(3.0) * s_h * s_h))
        }
        Scheme::Dcnhqc => re(c_h.powi(4)) + re(s_h * s_h + quarter * s_full * s_full) * eig,
    }
}

/// Fidelity evaluation route: the exact closed form built from
/// [`dressed_error_amplitude`], or its leading-order series in ε.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FidelityMode {
    Exact,
    Series,
}

/// Gate fidelity under a pure amplitude error ε.
///
/// `Exact` evaluates F = ½|1 + A(μ)·e^{−iγ_g}| with A the dressed error
/// amplitude. `Series` returns the leading-order expansion:
/// second order in ε for the two-segment and two-loop schemes, fourth
/// order for the corrected and optimized ones.
pub fn scheme_fidelity<R: Real>(scheme: Scheme, gamma_g: R, epsilon: R, mode: FidelityMode) -> R {
    match mode {
        FidelityMode::Exact => {
            let amp = dressed_error_amplitude(scheme, gamma_g, epsilon);
            let one = C::new(R::one(), R::zero());
            (one + amp * phase(-gamma_g)).norm() * R::of(0.5)
        }
        FidelityMode::Series => {
            let pi2 = R::PI() * R::PI();
            let e2 = epsilon * epsilon;
            let one_minus_cos = R::one() - gamma_g.cos();
            match scheme {
                Scheme::Nhqc => R::one() - e2 * pi2 * one_minus_cos / R::of(8.0),
                Scheme::Tlnhqc => {
                    let s = (gamma_g / R::of(4.0)).sin();
                    let c = (gamma_g / R::of(2.0)).cos();
                    R::one() - e2 * pi2 * s * s * c * c
                }
                Scheme::Opnhqc => R::one() - e2 * e2 * pi2 * pi2 * one_minus_cos / R::of(64.0),
                Scheme::Dcnhqc => R::one() - e2 * e2 * pi2 * pi2 * one_minus_cos / R::of(32.0),
            }
        }
    }
}

/// Bloch-sphere trajectory of |b⟩ under a pulse sequence, sampled at
/// `samples` uniform times across the total duration. Components are
/// (⟨σ_x⟩, ⟨σ_y⟩, ⟨σ_z⟩) in the {|b⟩, |e⟩} subspace with |b⟩ at the north
/// pole; the dark state never mixes in, so the vector stays on the sphere.
pub fn bloch_trajectory<R: Real>(
    segments: &[PulseSegment<R>],
    g: &GateParams<R>,
    n: &NoiseParams<R>,
    samples: usize,
) -> Vec<[R; 3]> {
    assert!(samples >= 2, "a trajectory needs at least its endpoints");
    let total: R = segments.iter().map(|s| s.area).fold(R::zero(), |a, b| a + b);
    let (b, _) = bright_dark_basis(g);
    let b3 = embed3(&b);
    let mut out = Vec::with_capacity(samples);
    for k in 0..samples {
        let t = total * R::of(k as f64) / R::of((samples - 1) as f64);
        // Propagator rebuilt from scratch per sample: segment Hamiltonians
        // are constant, so partial segments are exact.
        let mut u = ComplexMatrix::identity(3);
        let mut elapsed = R::zero();
        for s in segments {
            if t <= elapsed {
                break;
            }
            let dt = (t - elapsed).min(s.area);
            let h = hamiltonian_3level(g, s.phi0, R::one(), n);
            u = &expm_generator(&h, dt).expect("Hermitian by construction") * &u;
            elapsed += s.area;
        }
        let psi = u.matmul(&b3).expect("3x1");
        let cb = b3.dagger().matmul(&psi).expect("1x1")[(0, 0)];
        let ce = psi[(2, 0)];
        let cross = cb.conj() * ce;
        out.push([R::of(2.0) * cross.re, R::of(2.0) * cross.im, cb.norm_sqr() - ce.norm_sqr()]);
    }
    out
}
