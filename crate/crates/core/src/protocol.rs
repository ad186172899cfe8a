//! End-to-end protocol runs built on the state layer: the two-party
//! guess-your-neighbour run, the N-party generalization, sweeps over all
//! instances, and noisy variants with their tolerance threshold.

use crate::error::{Error, Result};
use crate::fock::{DensityState, MeasurementOutcome, ModeUnitary, SingleParticleState};
use crate::games::{AnswerVector, BipartiteBehavior, GameInstance};
use crate::scalar::Scalar;

/// Final two-mode amplitudes after preparing the balanced superposition,
/// stamping the input bits as signs, and recombining through the two-mode
/// mixer. The particle ends deterministically at mode `x XOR y`.
///
/// Panics if `x` or `y` is not a bit.
pub fn bipartite_final_state<T: Scalar>(x: u8, y: u8) -> SingleParticleState<T> {
    assert!(x <= 1 && y <= 1, "inputs must be bits");
    let start = SingleParticleState::uniform_superposition(2).expect("two modes");
    let encoded = start
        .encode_phases(&[x as usize, y as usize], 2)
        .expect("bit inputs");
    encoded
        .apply_unitary(&ModeUnitary::dft(2).expect("two-mode mixer"))
        .expect("matching dimensions")
}

/// Runs the two-party protocol on input bits and returns the answers
/// `(a, b) = (s XOR x, s XOR y)` where `s = 1` iff the particle arrives
/// at the second site. The construction guarantees `a = y` and `b = x`.
///
/// Panics if `x` or `y` is not a bit.
pub fn run_bipartite(x: u8, y: u8) -> (u8, u8) {
    let state = bipartite_final_state::<f64>(x, y);
    let outcome = state.measure_location().expect("unit-norm final state");
    let s = u8::from(outcome.site_probability(1) > 0.5);
    (s ^ x, s ^ y)
}

/// Behavior table realized by the two-party protocol.
pub fn ideal_bipartite_behavior<T: Scalar>() -> BipartiteBehavior<T> {
    BipartiteBehavior::from_deterministic(run_bipartite)
}

/// Transcript of a single noiseless N-party run.
#[derive(Debug, Clone)]
pub struct NPartyRun<T: Scalar> {
    instance: GameInstance,
    final_state: SingleParticleState<T>,
    outcome: MeasurementOutcome<T>,
    answers: AnswerVector,
    win: bool,
}

impl<T: Scalar> NPartyRun<T> {
    pub fn instance(&self) -> &GameInstance {
        &self.instance
    }

    pub fn final_state(&self) -> &SingleParticleState<T> {
        &self.final_state
    }

    pub fn outcome(&self) -> &MeasurementOutcome<T> {
        &self.outcome
    }

    /// Claims derived from the arrival pattern: player `k` says YES iff
    /// its site carries more than half the probability mass.
    pub fn answers(&self) -> &AnswerVector {
        &self.answers
    }

    pub fn win(&self) -> bool {
        self.win
    }
}

/// Runs the noiseless N-party protocol on one instance: balanced
/// superposition, per-site phase stamp, recombination, position readout.
/// The particle lands on the slope site with probability one and the final
/// amplitude there carries the offset as a pure phase.
pub fn run_nparty<T: Scalar>(instance: &GameInstance) -> Result<NPartyRun<T>> {
    let n = instance.n_players();
    let start = SingleParticleState::uniform_superposition(n)?;
    let encoded = start.encode_phases(&instance.inputs(), n)?;
    let final_state = encoded.apply_unitary(&ModeUnitary::dft(n)?)?;
    let outcome = final_state.measure_location()?;
    let half = T::from_real(0.5);
    let answers = AnswerVector::new(
        (0..n)
            .map(|k| outcome.site_probability(k) > half)
            .collect(),
    );
    let win = instance.score(&answers)?;
    Ok(NPartyRun {
        instance: instance.clone(),
        final_state,
        outcome,
        answers,
        win,
    })
}

/// One row of a sweep: what happened on a single instance.
#[derive(Debug, Clone)]
pub struct InstanceRecord<T: Scalar> {
    instance: GameInstance,
    outcome: MeasurementOutcome<T>,
    answers: AnswerVector,
    win: bool,
    win_probability: T,
}

impl<T: Scalar> InstanceRecord<T> {
    pub fn instance(&self) -> &GameInstance {
        &self.instance
    }

    pub fn outcome(&self) -> &MeasurementOutcome<T> {
        &self.outcome
    }

    /// Majority-readout claims: YES where a site holds more than half the
    /// probability mass. Under heavy noise this is all NO, which loses.
    pub fn answers(&self) -> &AnswerVector {
        &self.answers
    }

    /// Whether the majority-readout claims score on this instance.
    pub fn win(&self) -> bool {
        self.win
    }

    /// Probability of the one winning arrival pattern: detection exactly at
    /// the slope site. Detection elsewhere or no detection loses.
    pub fn win_probability(&self) -> T {
        self.win_probability
    }
}

/// Outcome table of a sweep over all `N^2` instances of the N-party game.
#[derive(Debug, Clone)]
pub struct ProtocolResult<T: Scalar> {
    records: Vec<InstanceRecord<T>>,
    success_probability: T,
}

impl<T: Scalar> ProtocolResult<T> {
    fn from_records(records: Vec<InstanceRecord<T>>) -> Self {
        let total: T = records.iter().map(|r| r.win_probability).sum();
        let success_probability = total / T::from_usize(records.len()).unwrap();
        Self {
            records,
            success_probability,
        }
    }

    pub fn records(&self) -> &[InstanceRecord<T>] {
        &self.records
    }

    /// Win probability averaged over the uniform instance distribution;
    /// always the mean of the per-record `win_probability` values.
    pub fn success_probability(&self) -> T {
        self.success_probability
    }
}

/// Noiseless sweep over all `N^2` instances via the pure-state path.
pub fn ideal_sweep<T: Scalar>(n_players: usize) -> Result<ProtocolResult<T>> {
    let mut records = Vec::with_capacity(n_players * n_players);
    for slope in 0..n_players {
        for offset in 0..n_players {
            let instance = GameInstance::new(n_players, slope, offset)?;
            let run = run_nparty::<T>(&instance)?;
            let win_probability = run.outcome.site_probability(slope);
            records.push(InstanceRecord {
                instance: run.instance,
                outcome: run.outcome,
                answers: run.answers,
                win: run.win,
                win_probability,
            });
        }
    }
    Ok(ProtocolResult::from_records(records))
}

/// Sweeps every instance with `initial` as the state entering the encoders,
/// using the density path throughout. The mode count of `initial` sets the
/// player count.
pub fn density_sweep<T: Scalar>(initial: &DensityState<T>) -> Result<ProtocolResult<T>> {
    let n = initial.n_modes();
    let dft = ModeUnitary::dft(n)?;
    let half = T::from_real(0.5);
    let mut records = Vec::with_capacity(n * n);
    for slope in 0..n {
        for offset in 0..n {
            let instance = GameInstance::new(n, slope, offset)?;
            let stamp = ModeUnitary::phase_encoding(&instance.inputs(), n)?;
            let outcome = initial.apply_unitary(&stamp)?.apply_unitary(&dft)?.measure()?;
            let answers = AnswerVector::new(
                (0..n)
                    .map(|k| outcome.site_probability(k) > half)
                    .collect(),
            );
            let win = instance.score(&answers)?;
            let win_probability = outcome.site_probability(slope);
            records.push(InstanceRecord {
                instance,
                outcome,
                answers,
                win,
                win_probability,
            });
        }
    }
    Ok(ProtocolResult::from_records(records))
}

/// Replacement state used when the channel acts.
#[derive(Debug, Clone)]
pub enum NoiseKind<T: Scalar> {
    /// Particle equally likely at every site, never lost.
    White,
    /// Particle absorbed: all weight on the no-particle slot.
    Loss,
    /// Caller-supplied replacement state.
    Custom(DensityState<T>),
}

/// A noise channel: with probability `lambda` the prepared state is replaced
/// by the state described by `kind`, otherwise it passes untouched.
#[derive(Debug, Clone)]
pub struct NoiseModel<T: Scalar> {
    kind: NoiseKind<T>,
    lambda: T,
}

impl<T: Scalar> NoiseModel<T> {
    pub fn new(kind: NoiseKind<T>, lambda: T) -> Result<Self> {
        if !(lambda >= T::zero() && lambda <= T::one()) {
            return Err(Error::WeightOutOfRange(lambda.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self { kind, lambda })
    }

    pub fn kind(&self) -> &NoiseKind<T> {
        &self.kind
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    /// The replacement state for an `n_players`-site run.
    pub fn noise_state(&self, n_players: usize) -> Result<DensityState<T>> {
        match &self.kind {
            NoiseKind::White => DensityState::white_noise(n_players),
            NoiseKind::Loss => DensityState::loss(n_players),
            NoiseKind::Custom(state) => {
                if state.n_modes() != n_players {
                    return Err(Error::DimensionMismatch {
                        expected: n_players,
                        got: state.n_modes(),
                    });
                }
                Ok(state.clone())
            }
        }
    }

    /// Success probability of the replacement state alone: exactly `1/N`
    /// for white noise and `0` for loss, measured by a full sweep for a
    /// custom state.
    pub fn win_rate(&self, n_players: usize) -> Result<T> {
        match &self.kind {
            NoiseKind::White => Ok(T::from_usize(n_players).unwrap().recip()),
            NoiseKind::Loss => Ok(T::zero()),
            NoiseKind::Custom(_) => {
                Ok(density_sweep(&self.noise_state(n_players)?)?.success_probability())
            }
        }
    }
}

/// Mixes the prepared state with the noise and sweeps every instance.
/// The overall success is affine in the mixing weight:
/// `1 - lambda + lambda * win_rate`.
pub fn noisy_sweep<T: Scalar>(n_players: usize, noise: &NoiseModel<T>) -> Result<ProtocolResult<T>> {
    let pure = SingleParticleState::uniform_superposition(n_players)?;
    let mixed = DensityState::mix(
        &DensityState::from_pure(&pure),
        &noise.noise_state(n_players)?,
        noise.lambda(),
    )?;
    density_sweep(&mixed)
}

/// Largest noise weight that keeps the protocol above the `1/N` classical
/// ceiling, clamped to the physical range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseThreshold<T> {
    /// Critical weight `min(1, (1 - 1/N) / (1 - win_rate))`.
    pub lambda_c: T,
    /// True when the unclamped value exceeded one, i.e. the protocol beats
    /// the ceiling at every physical noise level.
    pub clamped: bool,
}

/// Critical noise weight for an `n_players` run against a channel whose
/// replacement state wins with probability `win_rate`.
pub fn noise_threshold<T: Scalar>(n_players: usize, win_rate: T) -> Result<NoiseThreshold<T>> {
    if n_players < 2 {
        return Err(Error::BadModulus(n_players));
    }
    if !(win_rate >= T::zero() && win_rate < T::one()) {
        return Err(Error::NoiseRateOutOfRange(
            win_rate.to_f64().unwrap_or(f64::NAN),
        ));
    }
    let ceiling_gap = T::one() - T::from_usize(n_players).unwrap().recip();
    let raw = ceiling_gap / (T::one() - win_rate);
    if raw > T::one() {
        Ok(NoiseThreshold {
            lambda_c: T::one(),
            clamped: true,
        })
    } else {
        Ok(NoiseThreshold {
            lambda_c: raw,
            clamped: false,
        })
    }
}
