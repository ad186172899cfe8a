//! Single-particle mode simulator.
//!
//! A single excitation is delocalized over `N` spatial modes; an explicit
//! vacuum slot tracks the no-particle component so lossy mixtures stay inside
//! one Hilbert space. Pure states hold one complex amplitude per mode plus
//! the vacuum amplitude. Density operators act on the full `(N+1)`-dimensional
//! space with basis order `[vacuum, mode 0, .., mode N-1]`.
//!
//! Mode transformations are given as `N x N` unitaries `U` with the creation
//! operator convention `a_k^dag -> sum_l U[k][l] a_l^dag`, i.e. amplitudes map
//! as `c'_l = sum_k c_k U[k][l]`. The discrete Fourier transform used by the
//! protocols is fixed, normatively, to `U[k][l] = exp(-2 pi i k l / N) / sqrt(N)`.
//! The vacuum is left untouched by every mode unitary and by phase encoding.

use num_complex::Complex;

use crate::cmatrix::CMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Unit table of `modulus`-th roots: entry `j` is `exp(sign * 2 pi i j / modulus)`.
fn root_table<T: Scalar>(modulus: usize, sign: f64) -> Vec<Complex<T>> {
    (0..modulus)
        .map(|j| {
            let angle = sign * 2.0 * std::f64::consts::PI * (j as f64) / (modulus as f64);
            Complex::from_polar(T::one(), T::from_real(angle))
        })
        .collect()
}

/// Pure state of one particle spread over `n_modes` modes plus vacuum.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleParticleState<T> {
    modes: Vec<Complex<T>>,
    vacuum: Complex<T>,
}

impl<T: Scalar> SingleParticleState<T> {
    /// Validates normalization: `|vac|^2 + sum |c_k|^2 = 1` within the
    /// algebraic tolerance.
    pub fn new(modes: Vec<Complex<T>>, vacuum: Complex<T>) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::EmptyModes);
        }
        let state = Self { modes, vacuum };
        let dev = (state.norm_sqr() - T::one()).abs();
        if dev > T::algebra_tolerance() {
            return Err(Error::NotNormalized {
                deviation: dev.to_f64().unwrap_or(f64::NAN),
                tolerance: T::algebra_tolerance().to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(state)
    }

    /// Equal-weight superposition `(1/sqrt(N)) sum_k a_k^dag |vac>`.
    ///
    /// Viewed site by site in occupation numbers this is the N-partite
    /// W state; quantifying that entanglement is out of scope here, the
    /// protocols only ever consume the state as a whole.
    pub fn uniform_superposition(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::EmptyModes);
        }
        let amp = Complex::new(T::one() / T::from_usize(n_modes).unwrap().sqrt(), T::zero());
        Self::new(vec![amp; n_modes], Complex::new(T::zero(), T::zero()))
    }

    pub fn n_modes(&self) -> usize {
        self.modes.len()
    }

    pub fn mode_amplitudes(&self) -> &[Complex<T>] {
        &self.modes
    }

    pub fn vacuum_amplitude(&self) -> Complex<T> {
        self.vacuum
    }

    pub fn norm_sqr(&self) -> T {
        let mut s = self.vacuum.norm_sqr();
        for a in &self.modes {
            s = s + a.norm_sqr();
        }
        s
    }

    /// Local phase encoding: amplitude `k` picks up `omega^(x_k)` with
    /// `omega = exp(2 pi i / modulus)`. Inputs are reduced mod `modulus`;
    /// the vacuum amplitude is unchanged.
    pub fn encode_phases(&self, inputs: &[usize], modulus: usize) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::BadModulus(modulus));
        }
        if inputs.len() != self.modes.len() {
            return Err(Error::DimensionMismatch {
                expected: self.modes.len(),
                got: inputs.len(),
            });
        }
        let table = root_table::<T>(modulus, 1.0);
        let modes = self
            .modes
            .iter()
            .zip(inputs)
            .map(|(a, &x)| *a * table[x % modulus])
            .collect();
        Self::new(modes, self.vacuum)
    }

    /// Applies a mode unitary: `c'_l = sum_k c_k U[k][l]`, vacuum fixed.
    pub fn apply_unitary(&self, u: &ModeUnitary<T>) -> Result<Self> {
        if u.dim() != self.modes.len() {
            return Err(Error::DimensionMismatch {
                expected: self.modes.len(),
                got: u.dim(),
            });
        }
        let n = self.modes.len();
        let mut out = vec![Complex::new(T::zero(), T::zero()); n];
        for (k, c) in self.modes.iter().enumerate() {
            for (l, o) in out.iter_mut().enumerate() {
                *o = *o + *c * u.entry(k, l);
            }
        }
        Self::new(out, self.vacuum)
    }

    /// Multiplies the whole state (vacuum included) by `exp(i theta)`.
    pub fn with_global_phase(&self, theta: T) -> Self {
        let ph = Complex::from_polar(T::one(), theta);
        Self {
            modes: self.modes.iter().map(|a| *a * ph).collect(),
            vacuum: self.vacuum * ph,
        }
    }

    /// Projective position measurement over `[no particle, mode 0, .., mode N-1]`.
    ///
    /// Errors out if the squared norm drifted from 1 by more than the (looser)
    /// measurement precondition tolerance; this is unreachable for states kept
    /// inside the constructor invariant and guards states a caller patched up.
    pub fn measure_location(&self) -> Result<MeasurementOutcome<T>> {
        let dev = (self.norm_sqr() - T::one()).abs();
        if dev > T::norm_tolerance() {
            return Err(Error::NotNormalized {
                deviation: dev.to_f64().unwrap_or(f64::NAN),
                tolerance: T::norm_tolerance().to_f64().unwrap_or(f64::NAN),
            });
        }
        let mut probs = Vec::with_capacity(self.modes.len() + 1);
        probs.push(self.vacuum.norm_sqr());
        probs.extend(self.modes.iter().map(|a| a.norm_sqr()));
        MeasurementOutcome::from_raw(probs)
    }
}

/// Unitary acting on the particle sector of the mode space.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeUnitary<T> {
    mat: CMatrix<T>,
}

impl<T: Scalar> ModeUnitary<T> {
    /// Checks `U^H U = I` within the algebraic tolerance.
    pub fn new(mat: CMatrix<T>) -> Result<Self> {
        if mat.dim() == 0 {
            return Err(Error::EmptyModes);
        }
        let dev = mat.unitarity_deviation();
        if dev > T::algebra_tolerance() {
            return Err(Error::NotUnitary {
                deviation: dev.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { mat })
    }

    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Result<Self> {
        Self::new(CMatrix::from_rows(rows)?)
    }

    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyModes);
        }
        Ok(Self {
            mat: CMatrix::identity(n),
        })
    }

    /// Discrete Fourier transform, `U[k][l] = exp(-2 pi i k l / N) / sqrt(N)`.
    /// The minus sign in the exponent is part of the interface contract.
    pub fn dft(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyModes);
        }
        let table = root_table::<T>(n, -1.0);
        let scale = T::one() / T::from_usize(n).unwrap().sqrt();
        let mut mat = CMatrix::zeros(n);
        for k in 0..n {
            for l in 0..n {
                mat[(k, l)] = table[(k * l) % n].scale(scale);
            }
        }
        Self::new(mat)
    }

    /// Diagonal phase-encoding unitary `diag(omega^(x_0), .., omega^(x_{N-1}))`
    /// with `omega = exp(2 pi i / modulus)`; the density-path twin of
    /// [`SingleParticleState::encode_phases`].
    pub fn phase_encoding(inputs: &[usize], modulus: usize) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::BadModulus(modulus));
        }
        if inputs.is_empty() {
            return Err(Error::EmptyModes);
        }
        let table = root_table::<T>(modulus, 1.0);
        let mut mat = CMatrix::zeros(inputs.len());
        for (k, &x) in inputs.iter().enumerate() {
            mat[(k, k)] = table[x % modulus];
        }
        Self::new(mat)
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn entry(&self, k: usize, l: usize) -> Complex<T> {
        self.mat[(k, l)]
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.mat
    }

    /// `(N+1)`-dimensional action on amplitude column vectors: vacuum slot
    /// fixed, mode block transposed so that `v' = W v` matches the
    /// creation-operator convention used by the pure-state path.
    pub(crate) fn extended_amplitude_matrix(&self) -> CMatrix<T> {
        let n = self.dim();
        let mut w = CMatrix::zeros(n + 1);
        w[(0, 0)] = Complex::new(T::one(), T::zero());
        for i in 0..n {
            for j in 0..n {
                w[(i + 1, j + 1)] = self.mat[(j, i)];
            }
        }
        w
    }
}

/// Density operator on the `(N+1)`-dimensional vacuum + modes space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityState<T> {
    mat: CMatrix<T>,
}

impl<T: Scalar> DensityState<T> {
    /// Validates hermiticity and unit trace within the algebraic tolerance and
    /// positive semidefiniteness down to the rounding-noise floor.
    pub fn new(mat: CMatrix<T>) -> Result<Self> {
        if mat.dim() < 2 {
            return Err(Error::EmptyModes);
        }
        let herm = mat.hermiticity_deviation();
        if herm > T::algebra_tolerance() {
            return Err(Error::NotHermitian {
                deviation: herm.to_f64().unwrap_or(f64::NAN),
            });
        }
        let tr = mat.trace();
        let tr_dev = ((tr.re - T::one()).powi(2) + tr.im.powi(2)).sqrt();
        if tr_dev > T::algebra_tolerance() {
            return Err(Error::TraceNotOne {
                deviation: tr_dev.to_f64().unwrap_or(f64::NAN),
            });
        }
        if !mat.is_positive_semidefinite(T::psd_tolerance()) {
            return Err(Error::NotPositiveSemidefinite {
                tolerance: T::psd_tolerance().to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { mat })
    }

    /// `rho = |psi><psi|`.
    pub fn from_pure(state: &SingleParticleState<T>) -> Self {
        let n = state.n_modes();
        let mut v = Vec::with_capacity(n + 1);
        v.push(state.vacuum_amplitude());
        v.extend_from_slice(state.mode_amplitudes());
        let mut mat = CMatrix::zeros(n + 1);
        for i in 0..=n {
            for j in 0..=n {
                mat[(i, j)] = v[i] * v[j].conj();
            }
        }
        Self { mat }
    }

    /// Maximally mixed single-particle state `(1/N) sum_k |k><k|`,
    /// no vacuum component.
    pub fn white_noise(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::EmptyModes);
        }
        let mut mat = CMatrix::zeros(n_modes + 1);
        let p = T::one() / T::from_usize(n_modes).unwrap();
        for k in 1..=n_modes {
            mat[(k, k)] = Complex::new(p, T::zero());
        }
        Ok(Self { mat })
    }

    /// Particle lost: all weight on the vacuum slot.
    pub fn loss(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::EmptyModes);
        }
        let mut mat = CMatrix::zeros(n_modes + 1);
        mat[(0, 0)] = Complex::new(T::one(), T::zero());
        Ok(Self { mat })
    }

    /// Convex mixture `(1 - lambda) * signal + lambda * noise`.
    pub fn mix(signal: &Self, noise: &Self, lambda: T) -> Result<Self> {
        if lambda < T::zero() || lambda > T::one() {
            return Err(Error::WeightOutOfRange(lambda.to_f64().unwrap_or(f64::NAN)));
        }
        if signal.dim() != noise.dim() {
            return Err(Error::DimensionMismatch {
                expected: signal.dim(),
                got: noise.dim(),
            });
        }
        Self::new(signal.mat.lincomb(T::one() - lambda, &noise.mat, lambda))
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn n_modes(&self) -> usize {
        self.mat.dim() - 1
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.mat
    }

    /// Conjugation by the vacuum-fixed extension of `u`.
    pub fn apply_unitary(&self, u: &ModeUnitary<T>) -> Result<Self> {
        if u.dim() != self.n_modes() {
            return Err(Error::DimensionMismatch {
                expected: self.n_modes(),
                got: u.dim(),
            });
        }
        let w = u.extended_amplitude_matrix();
        Self::new(w.mul(&self.mat).mul(&w.adjoint()))
    }

    /// Diagonal readout over `[no particle, mode 0, .., mode N-1]`.
    pub fn measure(&self) -> Result<MeasurementOutcome<T>> {
        let probs = (0..self.dim()).map(|i| self.mat[(i, i)].re).collect();
        MeasurementOutcome::from_raw(probs)
    }
}

/// Probability table of a position measurement; index 0 is the no-particle
/// outcome, index `k + 1` the particle found in mode `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementOutcome<T> {
    probs: Vec<T>,
}

impl<T: Scalar> MeasurementOutcome<T> {
    /// Clamps rounding noise into `[0, 1]`: negatives no worse than the noise
    /// floor become 0, anything more negative is an error. The total must be
    /// 1 within the algebraic tolerance.
    pub fn from_raw(raw: Vec<T>) -> Result<Self> {
        if raw.len() < 2 {
            return Err(Error::EmptyModes);
        }
        let mut probs = Vec::with_capacity(raw.len());
        for p in raw {
            if p < -T::psd_tolerance() {
                return Err(Error::NegativeProbability {
                    value: p.to_f64().unwrap_or(f64::NAN),
                });
            }
            probs.push(p.max(T::zero()).min(T::one()));
        }
        let total: T = probs.iter().copied().sum();
        let dev = (total - T::one()).abs();
        if dev > T::norm_tolerance() {
            return Err(Error::NotNormalized {
                deviation: dev.to_f64().unwrap_or(f64::NAN),
                tolerance: T::norm_tolerance().to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { probs })
    }

    pub fn probabilities(&self) -> &[T] {
        &self.probs
    }

    pub fn n_modes(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn vacuum_probability(&self) -> T {
        self.probs[0]
    }

    /// Probability that the particle sits in mode `k`.
    pub fn site_probability(&self, k: usize) -> T {
        self.probs[k + 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn assert_close(a: C, b: C, tol: f64) {
        assert!((a - b).norm() <= tol, "{a} != {b}");
    }

    #[test]
    fn uniform_superposition_has_equal_amplitudes_and_no_vacuum() {
        let s = SingleParticleState::<f64>::uniform_superposition(4).unwrap();
        for a in s.mode_amplitudes() {
            assert_close(*a, c(0.5, 0.0), 1e-15);
        }
        assert_eq!(s.vacuum_amplitude(), c(0.0, 0.0));
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_modes_is_rejected() {
        assert_eq!(
            SingleParticleState::<f64>::uniform_superposition(0),
            Err(Error::EmptyModes)
        );
    }

    #[test]
    fn constructor_rejects_unnormalized_amplitudes() {
        let err = SingleParticleState::new(vec![c(0.6, 0.0), c(0.6, 0.0)], c(0.0, 0.0));
        assert!(matches!(err, Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn binary_phase_encoding_flips_signs() {
        let s = SingleParticleState::<f64>::uniform_superposition(2).unwrap();
        let e = s.encode_phases(&[1, 0], 2).unwrap();
        let r = 1.0 / 2.0_f64.sqrt();
        assert_close(e.mode_amplitudes()[0], c(-r, 0.0), 1e-15);
        assert_close(e.mode_amplitudes()[1], c(r, 0.0), 1e-15);
    }

    #[test]
    fn ternary_phase_encoding_matches_root_powers() {
        let s = SingleParticleState::<f64>::uniform_superposition(3).unwrap();
        let e = s.encode_phases(&[0, 1, 2], 3).unwrap();
        let r = 1.0 / 3.0_f64.sqrt();
        let omega = C::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        assert_close(e.mode_amplitudes()[0], c(r, 0.0), 1e-15);
        assert_close(e.mode_amplitudes()[1], omega.scale(r), 1e-15);
        assert_close(e.mode_amplitudes()[2], (omega * omega).scale(r), 1e-15);
    }

    #[test]
    fn encoding_validates_modulus_and_length() {
        let s = SingleParticleState::<f64>::uniform_superposition(2).unwrap();
        assert_eq!(s.encode_phases(&[0, 1], 1), Err(Error::BadModulus(1)));
        assert!(matches!(
            s.encode_phases(&[0], 2),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn dft_of_one_mode_is_identity() {
        let u = ModeUnitary::<f64>::dft(1).unwrap();
        assert_close(u.entry(0, 0), c(1.0, 0.0), 1e-15);
    }

    #[test]
    fn dft_of_two_modes_is_the_balanced_splitter() {
        let u = ModeUnitary::<f64>::dft(2).unwrap();
        let r = 1.0 / 2.0_f64.sqrt();
        assert_close(u.entry(0, 0), c(r, 0.0), 1e-15);
        assert_close(u.entry(0, 1), c(r, 0.0), 1e-15);
        assert_close(u.entry(1, 0), c(r, 0.0), 1e-15);
        assert_close(u.entry(1, 1), c(-r, 0.0), 1e-15);
    }

    #[test]
    fn dft_exponent_sign_is_negative() {
        let u = ModeUnitary::<f64>::dft(4).unwrap();
        // entry (1,1) = exp(-2 pi i / 4) / 2 = -i / 2
        assert_close(u.entry(1, 1), c(0.0, -0.5), 1e-15);
    }

    #[test]
    fn dft_stays_unitary_up_to_64_modes() {
        for n in [3, 8, 17, 64] {
            let u = ModeUnitary::<f64>::dft(n).unwrap();
            assert!(u.matrix().unitarity_deviation() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn non_unitary_matrix_is_rejected() {
        let rows = vec![
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(1.0, 0.0), c(1.0, 0.0)],
        ];
        assert!(matches!(
            ModeUnitary::from_rows(&rows),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn balanced_splitter_recombines_equal_phases() {
        let s = SingleParticleState::<f64>::uniform_superposition(2).unwrap();
        let u = ModeUnitary::dft(2).unwrap();
        let out = s.encode_phases(&[0, 0], 2).unwrap().apply_unitary(&u).unwrap();
        assert_close(out.mode_amplitudes()[0], c(1.0, 0.0), 1e-12);
        assert_close(out.mode_amplitudes()[1], c(0.0, 0.0), 1e-12);
    }

    #[test]
    fn measurement_reads_mode_weights_after_vacuum() {
        let s = SingleParticleState::<f64>::uniform_superposition(2).unwrap();
        let m = s.measure_location().unwrap();
        assert_eq!(m.probabilities().len(), 3);
        assert!((m.vacuum_probability() - 0.0).abs() < 1e-15);
        assert!((m.site_probability(0) - 0.5).abs() < 1e-15);
        assert!((m.site_probability(1) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn vacuum_weight_shows_up_at_index_zero() {
        let r = 1.0 / 2.0_f64.sqrt();
        let s = SingleParticleState::new(vec![c(0.5, 0.0), c(0.5, 0.0)], c(r, 0.0)).unwrap();
        let m = s.measure_location().unwrap();
        assert!((m.vacuum_probability() - 0.5).abs() < 1e-12);
        assert!((m.site_probability(0) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn pure_density_matches_outer_product() {
        let s = SingleParticleState::<f64>::uniform_superposition(2).unwrap();
        let rho = DensityState::from_pure(&s);
        assert_eq!(rho.dim(), 3);
        assert_close(rho.matrix()[(0, 0)], c(0.0, 0.0), 1e-15);
        assert_close(rho.matrix()[(1, 1)], c(0.5, 0.0), 1e-15);
        assert_close(rho.matrix()[(1, 2)], c(0.5, 0.0), 1e-15);
        let m = rho.measure().unwrap();
        assert!((m.site_probability(1) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn white_noise_is_uniform_over_modes() {
        let rho = DensityState::<f64>::white_noise(3).unwrap();
        assert!((rho.matrix()[(0, 0)].re - 0.0).abs() < 1e-15);
        for k in 0..3 {
            assert!((rho.measure().unwrap().site_probability(k) - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn white_noise_is_invariant_under_the_dft() {
        let rho = DensityState::<f64>::white_noise(3).unwrap();
        let u = ModeUnitary::dft(3).unwrap();
        let out = rho.apply_unitary(&u).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-12);
    }

    #[test]
    fn loss_state_is_invariant_under_the_dft() {
        let rho = DensityState::<f64>::loss(3).unwrap();
        let u = ModeUnitary::dft(3).unwrap();
        let out = rho.apply_unitary(&u).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-12);
        assert!((out.measure().unwrap().vacuum_probability() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mixing_interpolates_and_validates_lambda() {
        let pure = DensityState::from_pure(
            &SingleParticleState::<f64>::uniform_superposition(2).unwrap(),
        );
        let noise = DensityState::<f64>::white_noise(2).unwrap();
        let mixed = DensityState::mix(&pure, &noise, 0.25).unwrap();
        assert_close(mixed.matrix()[(1, 2)], c(0.375, 0.0), 1e-15);
        assert!(matches!(
            DensityState::mix(&pure, &noise, 1.5),
            Err(Error::WeightOutOfRange(_))
        ));
    }

    #[test]
    fn indefinite_matrix_is_rejected_as_density() {
        let mut m = CMatrix::<f64>::zeros(3);
        m[(0, 0)] = c(1.5, 0.0);
        m[(1, 1)] = c(-0.5, 0.0);
        assert!(matches!(
            DensityState::new(m),
            Err(Error::NotPositiveSemidefinite { .. })
        ));
    }

    #[test]
    fn probability_clamping_accepts_noise_and_rejects_real_negativity() {
        let m = MeasurementOutcome::from_raw(vec![-5e-11, 0.5, 0.5]).unwrap();
        assert_eq!(m.vacuum_probability(), 0.0);
        assert!(matches!(
            MeasurementOutcome::from_raw(vec![-1e-9, 0.5, 0.5]),
            Err(Error::NegativeProbability { .. })
        ));
    }

    #[test]
    fn single_precision_instantiation_works() {
        let s = SingleParticleState::<f32>::uniform_superposition(3).unwrap();
        let u = ModeUnitary::<f32>::dft(3).unwrap();
        let out = s.apply_unitary(&u).unwrap();
        assert!((out.norm_sqr() - 1.0).abs() < 1e-5);
    }
}
