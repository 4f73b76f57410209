//! Dense complex matrices of small dimension (2 to 64): products, Kronecker
//! products, Hermitian eigendecomposition, matrix exponentials of Hermitian
//! generators, and the global-phase-invariant trace gate fidelity.
//!
//! No sparse storage and no large-n ambitions; the hot loops skip exact
//! zeros so that structurally sparse operators (jump operators, exchange
//! Hamiltonians) stay cheap without a second storage format.

use crate::error::{Error, Result};
use crate::scalar::{Real, C};
use crate::HERMITIAN_TOL;

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<C<R>>,
}

impl<R: std::fmt::Debug> std::fmt::Debug for ComplexMatrix<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = &self.data[i * self.cols + j];
                write!(f, "{:?}+{:?}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<R: Real> ComplexMatrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C::new(R::zero(), R::zero()); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C::new(R::one(), R::zero());
        }
        m
    }

    /// Builds from a closure over (row, col).
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C<R>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds from nested row slices; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<C<R>>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged row lengths".into()));
        }
        Ok(Self { rows: r, cols: c, data: rows.concat() })
    }

    /// Column vector (n×1) from amplitudes.
    pub fn column(entries: &[C<R>]) -> Self {
        Self { rows: entries.len(), cols: 1, data: entries.to_vec() }
    }

    /// Basis column vector `|k⟩` of the given dimension.
    pub fn basis_column(dim: usize, k: usize) -> Self {
        let mut m = Self::zeros(dim, 1);
        m[(k, 0)] = C::new(R::one(), R::zero());
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C<R>] {
        &self.data
    }

    /// Matrix product; fails on inner-dimension mismatch.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "matmul {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        let zero = C::new(R::zero(), R::zero());
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.data[i * self.cols + k];
                if aik == zero {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += aik * *b;
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product; `self` supplies the slow (leftmost) indices.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self[(i1, j1)];
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        out[(i1 * other.rows + i2, j1 * other.cols + j2)] = a * other[(i2, j2)];
                    }
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> C<R> {
        debug_assert!(self.is_square());
        (0..self.rows).fold(C::new(R::zero(), R::zero()), |acc, i| acc + self[(i, i)])
    }

    pub fn scale(&self, z: C<R>) -> Self {
        let mut out = self.clone();
        for v in &mut out.data {
            *v *= z;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape("add: mismatched dimensions".into()));
        }
        let mut out = self.clone();
        for (o, b) in out.data.iter_mut().zip(&other.data) {
            *o += *b;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(C::new(-R::one(), R::zero())))
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> R {
        self.data.iter().map(|z| z.norm()).fold(R::zero(), R::max)
    }

    /// Largest entry-wise deviation from `other`.
    pub fn max_abs_diff(&self, other: &Self) -> R {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| (*a - *b).norm()).fold(R::zero(), R::max)
    }

    pub fn frobenius_norm(&self) -> R {
        self.data.iter().map(|z| z.norm_sqr()).fold(R::zero(), |a, b| a + b).sqrt()
    }

    /// `‖U†U − I‖_max < tol`.
    pub fn is_unitary(&self, tol: R) -> bool {
        if !self.is_square() {
            return false;
        }
        let gram = self.dagger().matmul(self).expect("square");
        gram.max_abs_diff(&Self::identity(self.rows)) < tol
    }

    /// `‖A − A†‖_max < tol`.
    pub fn is_hermitian(&self, tol: R) -> bool {
        self.is_square() && self.max_abs_diff(&self.dagger()) < tol
    }

    /// Hermitian, unit trace (±1e-10), eigenvalues ≥ −1e-10.
    pub fn is_density(&self, tol: R) -> bool {
        if !self.is_hermitian(tol) {
            return false;
        }
        let one_tol = R::of(1e-10);
        if (self.trace() - C::new(R::one(), R::zero())).norm() > one_tol {
            return false;
        }
        let (vals, _) = self.hermitian_eigen().expect("hermitian checked");
        vals.into_iter().all(|v| v > -one_tol)
    }

    /// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
    /// rotations. Returns `(eigenvalues, V)` with `self = V diag(λ) V†`,
    /// eigenvalues ascending.
    pub fn hermitian_eigen(&self) -> Result<(Vec<R>, Self)> {
        if !self.is_square() {
            return Err(Error::Shape("eigendecomposition needs a square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut v = Self::identity(n);
        let scale = a.frobenius_norm().max(R::one());
        let stop = scale * R::epsilon() * R::of(n as f64);

        for _sweep in 0..64 {
            let mut off = R::zero();
            for p in 0..n {
                for q in (p + 1)..n {
                    off += a[(p, q)].norm_sqr();
                }
            }
            if off.sqrt() <= stop {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[(p, q)];
                    let r = apq.norm();
                    if r <= scale * R::epsilon() * R::of(1e-3) {
                        continue;
                    }
                    // Factor out the phase so the 2x2 block is real symmetric,
                    // then apply the classic symmetric Schur rotation.
                    let ph = apq / C::new(r, R::zero());
                    let app = a[(p, p)].re;
                    let aqq = a[(q, q)].re;
                    let tau = (aqq - app) / (r + r);
                    let t = if tau >= R::zero() {
                        R::one() / (tau + (R::one() + tau * tau).sqrt())
                    } else {
                        -R::one() / (-tau + (R::one() + tau * tau).sqrt())
                    };
                    let c = R::one() / (R::one() + t * t).sqrt();
                    let s = t * c;
                    // G[p][p]=c·ph, G[p][q]=s·ph, G[q][p]=−s, G[q][q]=c.
                    let gpp = ph.scale(c);
                    let gpq = ph.scale(s);
                    let gqp = C::new(-s, R::zero());
                    let gqq = C::new(c, R::zero());
                    // A ← G† A G, acting on rows/cols p and q only.
                    for i in 0..n {
                        let aip = a[(i, p)];
                        let aiq = a[(i, q)];
                        a[(i, p)] = aip * gpp + aiq * gqp;
                        a[(i, q)] = aip * gpq + aiq * gqq;
                    }
                    for j in 0..n {
                        let apj = a[(p, j)];
                        let aqj = a[(q, j)];
                        a[(p, j)] = gpp.conj() * apj + gqp.conj() * aqj;
                        a[(q, j)] = gpq.conj() * apj + gqq.conj() * aqj;
                    }
                    a[(p, q)] = C::new(R::zero(), R::zero());
                    a[(q, p)] = C::new(R::zero(), R::zero());
                    for i in 0..n {
                        let vip = v[(i, p)];
                        let viq = v[(i, q)];
                        v[(i, p)] = vip * gpp + viq * gqp;
                        v[(i, q)] = vip * gpq + viq * gqq;
                    }
                }
            }
        }

        let mut order: Vec<usize> = (0..n).collect();
        let vals: Vec<R> = (0..n).map(|i| a[(i, i)].re).collect();
        order.sort_by(|&x, &y| vals[x].partial_cmp(&vals[y]).expect("finite eigenvalues"));
        let sorted_vals: Vec<R> = order.iter().map(|&i| vals[i]).collect();
        let sorted_v = Self::from_fn(n, n, |i, j| v[(i, order[j])]);
        Ok((sorted_vals, sorted_v))
    }
}

impl<R: Real> std::ops::Index<(usize, usize)> for ComplexMatrix<R> {
    type Output = C<R>;
    fn index(&self, (i, j): (usize, usize)) -> &C<R> {
        &self.data[i * self.cols + j]
    }
}

impl<R: Real> std::ops::IndexMut<(usize, usize)> for ComplexMatrix<R> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<R> {
        &mut self.data[i * self.cols + j]
    }
}

impl<R: Real> std::ops::Mul for &ComplexMatrix<R> {
    type Output = ComplexMatrix<R>;
    /// Operator form of [`ComplexMatrix::matmul`]; panics on shape mismatch.
    fn mul(self, rhs: &ComplexMatrix<R>) -> ComplexMatrix<R> {
        self.matmul(rhs).expect("operator * on mismatched shapes")
    }
}

/// `exp(−i·h·t)` for Hermitian `h` and `t ≥ 0`, via eigendecomposition.
pub fn expm_generator<R: Real>(h: &ComplexMatrix<R>, t: R) -> Result<ComplexMatrix<R>> {
    if !h.is_square() {
        return Err(Error::Shape("generator must be square".into()));
    }
    if !h.is_hermitian(R::of(HERMITIAN_TOL)) {
        return Err(Error::InvalidInput("generator is not Hermitian within tolerance".into()));
    }
    if t < R::zero() {
        return Err(Error::InvalidInput("negative duration".into()));
    }
    let (vals, v) = h.hermitian_eigen()?;
    let n = h.rows();
    let mut phased = v.clone();
    // phased = V · diag(exp(−i λ t)), then U = phased · V†.
    for (j, lam) in vals.iter().enumerate() {
        let ph = C::from_polar(R::one(), -*lam * t);
        for i in 0..n {
            phased[(i, j)] *= ph;
        }
    }
    Ok(&phased * &v.dagger())
}

/// Trace gate fidelity `|Tr(U†·Uᵉ)| / |Tr(U†·U)|`, invariant under a global
/// phase of either argument.
pub fn trace_fidelity<R: Real>(
    u_ideal: &ComplexMatrix<R>,
    u_actual: &ComplexMatrix<R>,
) -> Result<R> {
    if !u_ideal.is_square() || u_ideal.rows() != u_actual.rows() || !u_actual.is_square() {
        return Err(Error::Shape("trace_fidelity needs equal square dimensions".into()));
    }
    let ud = u_ideal.dagger();
    let num = ud.matmul(u_actual)?.trace().norm();
    let den = ud.matmul(u_ideal)?.trace().norm();
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ORACLE_TOL;
    type M = ComplexMatrix<f64>;
    type Z = C<f64>;

    fn z(re: f64, im: f64) -> Z {
        Z::new(re, im)
    }

    /// Deterministic pseudo-random complex entries (splitmix-style), so the
    /// oracle fixtures never move between runs.
    fn lcg_matrix(rows: usize, cols: usize, seed: &mut u64) -> M {
        M::from_fn(rows, cols, |_, _| {
            let mut next = || {
                *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((*seed >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
            };
            z(next(), next())
        })
    }

    fn hermitize(m: &M) -> M {
        m.add(&m.dagger()).unwrap().scale(z(0.5, 0.0))
    }

    fn sigma_x() -> M {
        M::from_rows(&[vec![z(0., 0.), z(1., 0.)], vec![z(1., 0.), z(0., 0.)]]).unwrap()
    }

    fn sigma_z() -> M {
        M::from_rows(&[vec![z(1., 0.), z(0., 0.)], vec![z(0., 0.), z(-1., 0.)]]).unwrap()
    }

    #[test]
    fn matmul_identity_passthrough() {
        let mut seed = 7;
        let m = lcg_matrix(3, 3, &mut seed);
        let im = M::identity(3).matmul(&m).unwrap();
        assert!(im.max_abs_diff(&m) == 0.0);
    }

    #[test]
    fn matmul_pauli_involution() {
        let xx = sigma_x().matmul(&sigma_x()).unwrap();
        assert!(xx.max_abs_diff(&M::identity(2)) < 1e-15);
    }

    // Oracle: entry-wise triple loop written independently of the
    // production kernel (no zero skipping, explicit index arithmetic).
    fn matmul_oracle(a: &M, b: &M) -> M {
        let mut out = M::zeros(a.rows(), b.cols());
        for i in 0..a.rows() {
            for j in 0..b.cols() {
                let mut acc = z(0.0, 0.0);
                for k in 0..a.cols() {
                    acc += a[(i, k)] * b[(k, j)];
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    #[test]
    fn matmul_matches_bruteforce_oracle() {
        let mut seed = 42;
        for _ in 0..8 {
            let a = lcg_matrix(3, 3, &mut seed);
            let b = lcg_matrix(3, 3, &mut seed);
            let got = a.matmul(&b).unwrap();
            assert!(got.max_abs_diff(&matmul_oracle(&a, &b)) < 1e-13);
        }
        // rectangular shapes too
        let a = lcg_matrix(2, 5, &mut seed);
        let b = lcg_matrix(5, 4, &mut seed);
        assert!(a.matmul(&b).unwrap().max_abs_diff(&matmul_oracle(&a, &b)) < 1e-13);
    }

    #[test]
    fn matmul_shape_error() {
        let a = M::zeros(2, 3);
        let b = M::zeros(2, 3);
        assert!(matches!(a.matmul(&b), Err(Error::Shape(_))));
    }

    #[test]
    fn kron_identities() {
        let i2 = M::identity(2);
        assert!(i2.kron(&i2).max_abs_diff(&M::identity(4)) == 0.0);
        // |1⟩⊗|0⟩⊗|0⟩ lands at index 4 (binary 100) of dimension 8.
        let one = M::basis_column(2, 1);
        let zero = M::basis_column(2, 0);
        let v = one.kron(&zero).kron(&zero);
        assert_eq!(v.rows(), 8);
        for i in 0..8 {
            let expect = if i == 4 { 1.0 } else { 0.0 };
            assert!((v[(i, 0)] - z(expect, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn kron_matches_index_formula_oracle() {
        // Oracle: out[(i1*r2+i2, j1*c2+j2)] = a[i1,j1]*b[i2,j2], checked
        // entry-by-entry with independent index arithmetic.
        let a = sigma_x();
        let b = sigma_z();
        let k = a.kron(&b);
        for i in 0..4 {
            for j in 0..4 {
                let want = a[(i / 2, j / 2)] * b[(i % 2, j % 2)];
                assert!((k[(i, j)] - want).norm() < 1e-15);
            }
        }
        let mut seed = 99;
        let a = lcg_matrix(2, 3, &mut seed);
        let b = lcg_matrix(3, 2, &mut seed);
        let k = a.kron(&b);
        assert_eq!((k.rows(), k.cols()), (6, 6));
        for i in 0..6 {
            for j in 0..6 {
                let want = a[(i / 3, j / 2)] * b[(i % 3, j % 2)];
                assert!((k[(i, j)] - want).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn expm_zero_generator_is_identity() {
        let h = M::zeros(3, 3);
        let u = expm_generator(&h, 1.3).unwrap();
        assert!(u.max_abs_diff(&M::identity(3)) < 1e-14);
    }

    #[test]
    fn expm_pauli_rotation_closed_form() {
        // exp(−i σx π/2) = −i σx
        let u = expm_generator(&sigma_x(), std::f64::consts::FRAC_PI_2).unwrap();
        let want = sigma_x().scale(z(0.0, -1.0));
        assert!(u.max_abs_diff(&want) < 1e-12);
    }

    // Oracle: scaling-and-squaring Taylor series, independent of the
    // eigendecomposition route used by the implementation.
    fn expm_taylor_oracle(h: &M, t: f64) -> M {
        let n = h.rows();
        let scaled = h.scale(z(0.0, -t)); // −i·h·t
        let norm = scaled.max_abs() * n as f64;
        let squarings = norm.log2().ceil().max(0.0) as u32 + 1;
        let small = scaled.scale(z(1.0 / f64::powi(2.0, squarings as i32), 0.0));
        let mut sum = M::identity(n);
        let mut term = M::identity(n);
        for k in 1..=40 {
            term = term.matmul(&small).unwrap().scale(z(1.0 / k as f64, 0.0));
            sum = sum.add(&term).unwrap();
        }
        for _ in 0..squarings {
            sum = sum.matmul(&sum).unwrap();
        }
        sum
    }

    #[test]
    fn expm_matches_taylor_oracle() {
        let mut seed = 2024;
        let h = hermitize(&lcg_matrix(3, 3, &mut seed));
        let u = expm_generator(&h, 0.7).unwrap();
        assert!(u.max_abs_diff(&expm_taylor_oracle(&h, 0.7)) < ORACLE_TOL);
        assert!(u.is_unitary(crate::UNITARY_TOL));
        // larger dimension exercise
        let h = hermitize(&lcg_matrix(8, 8, &mut seed));
        let u = expm_generator(&h, 1.9).unwrap();
        assert!(u.max_abs_diff(&expm_taylor_oracle(&h, 1.9)) < ORACLE_TOL);
    }

    #[test]
    fn expm_semigroup_property() {
        let mut seed = 5150;
        let h = hermitize(&lcg_matrix(4, 4, &mut seed));
        let u1 = expm_generator(&h, 0.4).unwrap();
        let u2 = expm_generator(&h, 0.9).unwrap();
        let u12 = expm_generator(&h, 1.3).unwrap();
        assert!(u1.matmul(&u2).unwrap().max_abs_diff(&u12) < ORACLE_TOL);
    }

    #[test]
    fn expm_rejects_non_hermitian_and_negative_time() {
        let mut seed = 31;
        let m = lcg_matrix(3, 3, &mut seed); // generic, not Hermitian
        assert!(matches!(expm_generator(&m, 0.5), Err(Error::InvalidInput(_))));
        let h = hermitize(&m);
        assert!(matches!(expm_generator(&h, -0.1), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn eigen_reconstructs_hermitian() {
        let mut seed = 777;
        for n in [2usize, 3, 5, 16] {
            let h = hermitize(&lcg_matrix(n, n, &mut seed));
            let (vals, v) = h.hermitian_eigen().unwrap();
            assert!(v.is_unitary(1e-11));
            let mut lam = M::zeros(n, n);
            for i in 0..n {
                lam[(i, i)] = z(vals[i], 0.0);
            }
            let rebuilt = &(&v * &lam) * &v.dagger();
            assert!(rebuilt.max_abs_diff(&h) < 1e-11);
            assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn trace_fidelity_global_phase_invariance() {
        let u = expm_generator(&sigma_x(), 0.3).unwrap();
        assert!((trace_fidelity(&u, &u).unwrap() - 1.0).abs() < 1e-14);
        let phased = u.scale(C::from_polar(1.0, std::f64::consts::FRAC_PI_3));
        assert!((trace_fidelity(&u, &phased).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn trace_fidelity_shape_error() {
        let u2 = M::identity(2);
        let u3 = M::identity(3);
        assert!(matches!(trace_fidelity(&u2, &u3), Err(Error::Shape(_))));
    }

    #[test]
    fn density_predicate() {
        let rho = M::from_rows(&[vec![z(0.5, 0.0), z(0.0, 0.0)], vec![z(0.0, 0.0), z(0.5, 0.0)]])
            .unwrap();
        assert!(rho.is_density(1e-12));
        let bad = rho.scale(z(2.0, 0.0));
        assert!(!bad.is_density(1e-12));
    }

    #[test]
    fn generic_scalar_f32_smoke() {
        // The same kernels compile and run over f32.
        type M32 = ComplexMatrix<f32>;
        let h = M32::from_rows(&[
            vec![C::new(0.0f32, 0.0), C::new(1.0, 0.0)],
            vec![C::new(1.0, 0.0), C::new(0.0, 0.0)],
        ])
        .unwrap();
        let u = expm_generator(&h, std::f32::consts::FRAC_PI_2).unwrap();
        let want = h.scale(C::new(0.0f32, -1.0));
        assert!(u.max_abs_diff(&want) < 1e-5);
    }
}
