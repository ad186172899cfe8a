#![allow(dead_code)]

//! Shared randomized-case generators and the reusable property suites.

use num_complex::Complex;
use particle_games::fock::{DensityState, ModeUnitary, SingleParticleState};
use particle_games::games::BipartiteBehavior;
use particle_games::CMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_complex<R: Rng>(rng: &mut R) -> Complex<f64> {
    Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Random normalized state over `n` modes, with a vacuum component roughly
/// half the time.
pub fn random_state<R: Rng>(n: usize, rng: &mut R) -> SingleParticleState<f64> {
    loop {
        let modes: Vec<Complex<f64>> = (0..n).map(|_| random_complex(rng)).collect();
        let vacuum = if rng.gen_bool(0.5) {
            random_complex(rng)
        } else {
            Complex::new(0.0, 0.0)
        };
        let norm = (modes.iter().map(|c| c.norm_sqr()).sum::<f64>() + vacuum.norm_sqr()).sqrt();
        if norm < 1e-3 {
            continue;
        }
        let modes = modes.into_iter().map(|c| c / norm).collect();
        return SingleParticleState::new(modes, vacuum / norm).unwrap();
    }
}

/// Random mode unitary: a complex matrix with independent uniform entries,
/// orthonormalized twice by modified Gram-Schmidt.
pub fn random_unitary<R: Rng>(n: usize, rng: &mut R) -> ModeUnitary<f64> {
    let mut rows: Vec<Vec<Complex<f64>>> = (0..n)
        .map(|_| (0..n).map(|_| random_complex(rng)).collect())
        .collect();
    for _ in 0..2 {
        for i in 0..n {
            for j in 0..i {
                let inner: Complex<f64> =
                    (0..n).map(|k| rows[j][k].conj() * rows[i][k]).sum();
                for k in 0..n {
                    let d = inner * rows[j][k];
                    rows[i][k] -= d;
                }
            }
            let norm = rows[i].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            assert!(norm > 1e-8, "degenerate random matrix");
            for c in rows[i].iter_mut() {
                *c /= norm;
            }
        }
    }
    ModeUnitary::from_rows(&rows).unwrap()
}

/// Random density operator: a convex blend of a few random pure states.
pub fn random_density<R: Rng>(n: usize, rng: &mut R) -> DensityState<f64> {
    let parts = rng.gen_range(1..=4);
    let states: Vec<SingleParticleState<f64>> =
        (0..parts).map(|_| random_state(n, rng)).collect();
    let mut weights: Vec<f64> = (0..parts).map(|_| rng.gen_range(0.1..1.0)).collect();
    let total: f64 = weights.iter().sum();
    for w in weights.iter_mut() {
        *w /= total;
    }
    let dim = n + 1;
    let mut rows = vec![vec![Complex::new(0.0, 0.0); dim]; dim];
    for (state, w) in states.iter().zip(&weights) {
        let mut amps = vec![state.vacuum_amplitude()];
        amps.extend_from_slice(state.mode_amplitudes());
        for i in 0..dim {
            for j in 0..dim {
                rows[i][j] += amps[i] * amps[j].conj() * w;
            }
        }
    }
    DensityState::new(CMatrix::from_rows(&rows).unwrap()).unwrap()
}

/// Random behavior table: each input block is an independent random
/// distribution over the four outputs.
pub fn random_behavior<R: Rng>(rng: &mut R) -> BipartiteBehavior<f64> {
    let mut probs = [0.0f64; 16];
    for block in 0..4 {
        let raw: Vec<f64> = (0..4).map(|_| rng.gen_range(0.01..1.0)).collect();
        let total: f64 = raw.iter().sum();
        for (o, r) in raw.iter().enumerate() {
            probs[block * 4 + o] = r / total;
        }
    }
    BipartiteBehavior::new(probs).unwrap()
}

fn check(ok: bool, msg: String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg)
    }
}

/// Circuit unitaries stay unitary: the recombiner at every size up to 64 and
/// random phase stamps composed with it.
pub fn suite_unitarity(cases: usize, seed: u64) -> Result<(), String> {
    let mut rng = rng(seed);
    for case in 0..cases {
        let n = if case < 63 {
            case + 2
        } else {
            rng.gen_range(2..=64)
        };
        let dft = ModeUnitary::<f64>::dft(n).unwrap();
        let dev = dft.matrix().unitarity_deviation();
        check(
            dev < 1e-12,
            format!("case {case}: recombiner at n={n} deviates by {dev:.3e}"),
        )?;
        let inputs: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
        let stamp = ModeUnitary::<f64>::phase_encoding(&inputs, n).unwrap();
        let product = stamp.matrix().mul(dft.matrix());
        let dev = product.unitarity_deviation();
        check(
            dev < 1e-12,
            format!("case {case}: stamped circuit at n={n} deviates by {dev:.3e}"),
        )?;
    }
    Ok(())
}

/// Evolution preserves the norm for random states under both the recombiner
/// and Gram-Schmidt random unitaries.
pub fn suite_normalization(cases: usize, seed: u64) -> Result<(), String> {
    let mut rng = rng(seed);
    for case in 0..cases {
        let n = rng.gen_range(2..=16);
        let state = random_state(n, &mut rng);
        let u = if case % 2 == 0 {
            ModeUnitary::dft(n).unwrap()
        } else {
            random_unitary(n, &mut rng)
        };
        let evolved = state.apply_unitary(&u).unwrap();
        let dev = (evolved.norm_sqr() - 1.0).abs();
        check(
            dev < 1e-12,
            format!("case {case}: norm drifts by {dev:.3e} at n={n}"),
        )?;
    }
    Ok(())
}

/// The pure-state path and the density path produce the same readout.
pub fn suite_pure_density_consistency(cases: usize, seed: u64) -> Result<(), String> {
    let mut rng = rng(seed);
    for case in 0..cases {
        let n = rng.gen_range(2..=16);
        let state = random_state(n, &mut rng);
        let u = random_unitary(n, &mut rng);
        let inputs: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
        let pure_out = state
            .encode_phases(&inputs, n)
            .unwrap()
            .apply_unitary(&u)
            .unwrap()
            .measure_location()
            .unwrap();
        let density_out = DensityState::from_pure(&state)
            .apply_unitary(&ModeUnitary::phase_encoding(&inputs, n).unwrap())
            .unwrap()
            .apply_unitary(&u)
            .unwrap()
            .measure()
            .unwrap();
        let diff = pure_out
            .probabilities()
            .iter()
            .zip(density_out.probabilities())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        check(
            diff < 1e-12,
            format!("case {case}: readouts differ by {diff:.3e} at n={n}"),
        )?;
    }
    Ok(())
}

/// A global phase never changes the readout.
pub fn suite_global_phase_invariance(cases: usize, seed: u64) -> Result<(), String> {
    let mut rng = rng(seed);
    for case in 0..cases {
        let n = rng.gen_range(2..=16);
        let state = random_state(n, &mut rng);
        let theta = rng.gen_range(-10.0..10.0);
        let u = random_unitary(n, &mut rng);
        let base = state
            .apply_unitary(&u)
            .unwrap()
            .measure_location()
            .unwrap();
        let shifted = state
            .with_global_phase(theta)
            .apply_unitary(&u)
            .unwrap()
            .measure_location()
            .unwrap();
        let diff = base
            .probabilities()
            .iter()
            .zip(shifted.probabilities())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        check(
            diff < 1e-12,
            format!("case {case}: phase {theta:.3} shifts readout by {diff:.3e}"),
        )?;
    }
    Ok(())
}

/// Game scores are affine in convex mixtures of behaviors.
pub fn suite_behavior_linearity(cases: usize, seed: u64) -> Result<(), String> {
    let mut rng = rng(seed);
    for case in 0..cases {
        let p = random_behavior(&mut rng);
        let q = random_behavior(&mut rng);
        let w = rng.gen_range(0.0..=1.0);
        let mixed = p.mix(&q, w).unwrap();
        let gyni = w * p.gyni_success() + (1.0 - w) * q.gyni_success();
        let lgyni = w * p.lgyni_success() + (1.0 - w) * q.lgyni_success();
        let dg = (mixed.gyni_success() - gyni).abs();
        let dl = (mixed.lgyni_success() - lgyni).abs();
        check(
            dg < 1e-12 && dl < 1e-12,
            format!("case {case}: mixture scores drift by {dg:.3e}/{dl:.3e} at w={w:.3}"),
        )?;
    }
    Ok(())
}
