//! Segment lists for the four pulse schemes and the ideal holonomic target
//! gates they implement.
//!
//! All schemes drive square pulses at unit amplitude, so a segment's
//! duration equals its area. Within one gate every segment shares (θ, φ);
//! only the drive phase φ₀ changes from segment to segment. Phases are
//! stored exactly as constructed, without wrapping into [0, 2π).

use crate::algebra::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::{phase, Real, C};

/// Target-gate parameters: rotation axis (θ, φ) and geometric phase γ_g.
///
/// Constructed only through [`GateParams::new`], which wraps φ and γ_g into
/// [0, 2π) and rejects θ outside [0, π].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GateParams<R> {
    theta: R,
    phi: R,
    gamma_g: R,
}

fn wrap_tau<R: Real>(x: R) -> R {
    let tau = R::PI() + R::PI();
    let m = x - tau * (x / tau).floor();
    // floor rounding can land exactly on tau for tiny negative inputs
    if m >= tau {
        m - tau
    } else {
        m
    }
}

impl<R: Real> GateParams<R> {
    pub fn new(theta: R, phi: R, gamma_g: R) -> Result<Self> {
        if !(theta >= R::zero() && theta <= R::PI()) {
            return Err(Error::InvalidInput(format!("theta must lie in [0, pi], got {:?}", theta)));
        }
        if !phi.is_finite() || !gamma_g.is_finite() {
            return Err(Error::InvalidInput("phi and gamma_g must be finite".into()));
        }
        Ok(Self { theta, phi: wrap_tau(phi), gamma_g: wrap_tau(gamma_g) })
    }

    /// X/2 gate: θ=π/2, φ=0, γ_g=π/2.
    pub fn x_half() -> Self {
        Self::new(R::FRAC_PI_2(), R::zero(), R::FRAC_PI_2()).expect("in range")
    }

    /// S gate: θ=0, φ=0, γ_g=π/2.
    pub fn s_gate() -> Self {
        Self::new(R::zero(), R::zero(), R::FRAC_PI_2()).expect("in range")
    }

    pub fn theta(&self) -> R {
        self.theta
    }

    pub fn phi(&self) -> R {
        self.phi
    }

    pub fn gamma_g(&self) -> R {
        self.gamma_g
    }
}

/// One constant-amplitude drive interval: pulse area and drive phase φ₀.
/// With unit drive amplitude the duration equals the area.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PulseSegment<R> {
    pub area: R,
    pub phi0: R,
}

/// The four pulse schemes, ordered by publication lineage:
/// the plain two-segment scheme (residual infidelity ∝ ε²), its two-loop
/// composite variant (ε² with a smaller prefactor), the dynamically
/// corrected six-segment variant (ε⁴), and the phase-optimized four-segment
/// variant (ε⁴ with half the prefactor at the same 2π total area).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    Nhqc,
    Tlnhqc,
    Dcnhqc,
    Opnhqc,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::Nhqc, Scheme::Tlnhqc, Scheme::Dcnhqc, Scheme::Opnhqc];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Nhqc => "nhqc",
            Scheme::Tlnhqc => "tlnhqc",
            Scheme::Dcnhqc => "dcnhqc",
            Scheme::Opnhqc => "opnhqc",
        }
    }

    /// Leading order of the residual infidelity in the amplitude error ε.
    pub fn error_order(self) -> u32 {
        match self {
            Scheme::Nhqc | Scheme::Tlnhqc => 2,
            Scheme::Dcnhqc | Scheme::Opnhqc => 4,
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nhqc" => Ok(Scheme::Nhqc),
            "tlnhqc" => Ok(Scheme::Tlnhqc),
            "dcnhqc" => Ok(Scheme::Dcnhqc),
            "opnhqc" => Ok(Scheme::Opnhqc),
            other => Err(Error::InvalidInput(format!(
                "unknown scheme '{other}' (expected nhqc, tlnhqc, dcnhqc, or opnhqc)"
            ))),
        }
    }
}

/// Segment list realizing `target_gate(g)` under the given scheme, with all
/// drive phases offset by `phi0_base`.
pub fn build_sequence<R: Real>(
    scheme: Scheme,
    g: &GateParams<R>,
    phi0_base: R,
) -> Vec<PulseSegment<R>> {
    let pi = R::PI();
    let h = R::FRAC_PI_2();
    let q = R::FRAC_PI_4();
    let gg = g.gamma_g();
    let p = phi0_base;
    let seg = |area: R, phi0: R| PulseSegment { area, phi0 };
    match scheme {
        Scheme::Nhqc => vec![seg(h, p), seg(h, p + pi - gg)],
        Scheme::Opnhqc => vec![
            seg(h, p),
            seg(h, p + pi - gg / R::of(2.0)),
            seg(h, p + pi - gg),
            seg(h, p + pi + pi - gg * R::of(1.5)),
        ],
        Scheme::Tlnhqc => {
            let loop_close = p + pi - gg / R::of(2.0);
            vec![seg(h, p), seg(h, loop_close), seg(h, p), seg(h, loop_close)]
        }
        Scheme::Dcnhqc => vec![
            seg(q, p),
            seg(h, p + h),
            seg(q, p),
            seg(q, p + pi - gg),
            seg(h, p - h - gg),
            seg(q, p + pi - gg),
        ],
    }
}

/// The ideal 2×2 holonomic gate on {|0⟩, |1⟩}:
/// `e^{iγ_g/2} · exp(−i (γ_g/2) n·σ)` with axis
/// n = (sinθ cosφ, sinθ sinφ, cosθ).
pub fn target_gate<R: Real>(g: &GateParams<R>) -> ComplexMatrix<R> {
    let half = g.gamma_g() * R::of(0.5);
    let (sh, ch) = half.sin_cos();
    let (st, ct) = g.theta().sin_cos();
    let global = phase(half);
    let mut u = ComplexMatrix::zeros(2, 2);
    u[(0, 0)] = global * C::new(ch, -sh * ct);
    u[(0, 1)] = global * C::new(R::zero(), -sh * st) * phase(-g.phi());
    u[(1, 0)] = global * C::new(R::zero(), -sh * st) * phase(g.phi());
    u[(1, 1)] = global * C::new(ch, sh * ct);
    u
}

/// Orthonormal bright/dark pair in {|0⟩, |1⟩} as 2×1 columns:
/// |b⟩ = sin(θ/2)|0⟩ − cos(θ/2)e^{iφ}|1⟩,
/// |d⟩ = −cos(θ/2)e^{−iφ}|0⟩ − sin(θ/2)|1⟩.
pub fn bright_dark_basis<R: Real>(g: &GateParams<R>) -> (ComplexMatrix<R>, ComplexMatrix<R>) {
    let half = g.theta() * R::of(0.5);
    let (s, c) = half.sin_cos();
    let b = ComplexMatrix::column(&[C::new(s, R::zero()), phase(g.phi()) * C::new(-c, R::zero())]);
    let d =
        ComplexMatrix::column(&[phase(-g.phi()) * C::new(-c, R::zero()), C::new(-s, R::zero())]);
    (b, d)
}
