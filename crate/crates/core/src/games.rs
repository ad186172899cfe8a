//! Referee logic for the guessing games.
//!
//! Bipartite: inputs `x, y` and outputs `a, b` are bits; the strict win
//! condition is `a = y` and `b = x` (guess the other side's input), the
//! lenient one only charges a player whose own input is 1. Behaviors are
//! 16-entry conditional probability tables with uniform inputs.
//!
//! `N`-party: a referee draws a hidden `(slope, offset)` pair uniformly and
//! hands player `k` the input `x_k = slope * k + offset (mod N)`. Each player
//! answers the question "does the slope equal my index?"; the round is won
//! only if every single answer is correct, i.e. player `slope` says YES and
//! everyone else says NO. The player count must be prime so that slopes can
//! be divided out of input differences.

use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Trial-division primality check; the game sizes here are tiny.
pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Strict bipartite win: each side outputs the other's input.
pub fn gyni_win(x: u8, y: u8, a: u8, b: u8) -> bool {
    a == y && b == x
}

/// Lenient bipartite win: a wrong guess only counts against a player whose
/// own input is 1, i.e. `x (a xor y) = 0` and `y (b xor x) = 0`.
pub fn lgyni_win(x: u8, y: u8, a: u8, b: u8) -> bool {
    (x == 0 || a == y) && (y == 0 || b == x)
}

/// One referee round of the `N`-party game: the hidden `(slope, offset)` pair
/// and the input string derived from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameInstance {
    n_players: usize,
    slope: usize,
    offset: usize,
}

impl GameInstance {
    pub fn new(n_players: usize, slope: usize, offset: usize) -> Result<Self> {
        if !is_prime(n_players) {
            return Err(Error::NotPrime(n_players));
        }
        if slope >= n_players {
            return Err(Error::InputOutOfRange {
                index: slope,
                modulus: n_players,
            });
        }
        if offset >= n_players {
            return Err(Error::InputOutOfRange {
                index: offset,
                modulus: n_players,
            });
        }
        Ok(Self {
            n_players,
            slope,
            offset,
        })
    }

    /// Draws `(slope, offset)` uniformly from the caller's generator, so runs
    /// are reproducible exactly when the caller seeds them.
    pub fn draw<R: Rng + ?Sized>(n_players: usize, rng: &mut R) -> Result<Self> {
        if !is_prime(n_players) {
            return Err(Error::NotPrime(n_players));
        }
        let slope = rng.gen_range(0..n_players);
        let offset = rng.gen_range(0..n_players);
        Self::new(n_players, slope, offset)
    }

    pub fn n_players(&self) -> usize {
        self.n_players
    }

    pub fn slope(&self) -> usize {
        self.slope
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    /// Input handed to player `k`.
    pub fn input_of(&self, k: usize) -> usize {
        (self.slope * k + self.offset) % self.n_players
    }

    pub fn inputs(&self) -> Vec<usize> {
        (0..self.n_players).map(|k| self.input_of(k)).collect()
    }

    /// Win iff player `slope` answers YES and every other player answers NO.
    pub fn score(&self, answers: &AnswerVector) -> Result<bool> {
        if answers.len() != self.n_players {
            return Err(Error::AnswerLengthMismatch {
                expected: self.n_players,
                got: answers.len(),
            });
        }
        Ok(answers
            .claims()
            .iter()
            .enumerate()
            .all(|(k, &yes)| yes == (k == self.slope)))
    }
}

/// One YES/NO answer per player; YES means "the slope is my index".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnswerVector {
    answers: Vec<bool>,
}

impl AnswerVector {
    pub fn new(answers: Vec<bool>) -> Self {
        Self { answers }
    }

    pub fn claims(&self) -> &[bool] {
        &self.answers
    }

    pub fn len(&self) -> usize {
        self.answers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.answers.is_empty()
    }

    /// Cyclic relabeling: entry `k` of the result is entry `k + c (mod N)`.
    pub fn rotate(&self, c: usize) -> Self {
        let n = self.answers.len();
        Self {
            answers: (0..n).map(|k| self.answers[(k + c) % n]).collect(),
        }
    }
}

impl From<Vec<bool>> for AnswerVector {
    fn from(answers: Vec<bool>) -> Self {
        Self::new(answers)
    }
}

/// Conditional probability table `p(a, b | x, y)` over bits, uniform inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteBehavior<T> {
    probs: [T; 16],
}

fn table_index(x: u8, y: u8, a: u8, b: u8) -> usize {
    debug_assert!(x < 2 && y < 2 && a < 2 && b < 2);
    (((x as usize * 2 + y as usize) * 2 + a as usize) * 2) + b as usize
}

impl<T: Scalar> BipartiteBehavior<T> {
    /// Validates that every conditional block sums to 1 and entries are
    /// non-negative; negatives within the rounding-noise floor are clamped.
    pub fn new(probs: [T; 16]) -> Result<Self> {
        let mut probs = probs;
        for p in &probs {
            if *p < -T::psd_tolerance() {
                return Err(Error::NegativeProbability {
                    value: p.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        for x in 0..2u8 {
            for y in 0..2u8 {
                let mut total = T::zero();
                for a in 0..2u8 {
                    for b in 0..2u8 {
                        total = total + probs[table_index(x, y, a, b)];
                    }
                }
                let dev = (total - T::one()).abs();
                if dev > T::algebra_tolerance() {
                    return Err(Error::NotNormalized {
                        deviation: dev.to_f64().unwrap_or(f64::NAN),
                        tolerance: T::algebra_tolerance().to_f64().unwrap_or(f64::NAN),
                    });
                }
            }
        }
        for p in probs.iter_mut() {
            *p = p.max(T::zero());
        }
        Ok(Self { probs })
    }

    /// Point distribution of a deterministic input-to-output map.
    pub fn from_deterministic(outputs: impl Fn(u8, u8) -> (u8, u8)) -> Self {
        let mut probs = [T::zero(); 16];
        for x in 0..2u8 {
            for y in 0..2u8 {
                let (a, b) = outputs(x, y);
                probs[table_index(x, y, a & 1, b & 1)] = T::one();
            }
        }
        Self { probs }
    }

    /// `p(a, b | x, y)`.
    pub fn prob(&self, x: u8, y: u8, a: u8, b: u8) -> T {
        assert!(x < 2 && y < 2 && a < 2 && b < 2, "arguments must be bits");
        self.probs[table_index(x, y, a, b)]
    }

    pub fn table(&self) -> &[T; 16] {
        &self.probs
    }

    fn average_win(&self, win: impl Fn(u8, u8, u8, u8) -> bool) -> T {
        let quarter = T::from_real(0.25);
        let mut total = T::zero();
        for x in 0..2u8 {
            for y in 0..2u8 {
                for a in 0..2u8 {
                    for b in 0..2u8 {
                        if win(x, y, a, b) {
                            total = total + self.probs[table_index(x, y, a, b)];
                        }
                    }
                }
            }
        }
        total * quarter
    }

    /// Strict-game value under uniform inputs.
    pub fn gyni_success(&self) -> T {
        self.average_win(gyni_win)
    }

    /// Lenient-game value under uniform inputs.
    pub fn lgyni_success(&self) -> T {
        self.average_win(lgyni_win)
    }

    /// Convex mixture `weight * self + (1 - weight) * other`.
    pub fn mix(&self, other: &Self, weight: T) -> Result<Self> {
        if weight < T::zero() || weight > T::one() {
            return Err(Error::WeightOutOfRange(weight.to_f64().unwrap_or(f64::NAN)));
        }
        let mut probs = [T::zero(); 16];
        for (i, p) in probs.iter_mut().enumerate() {
            *p = self.probs[i] * weight + other.probs[i] * (T::one() - weight);
        }
        Self::new(probs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn primality_by_trial_division() {
        let primes: Vec<usize> = (0..35).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31]);
        assert!(is_prime(10007));
        assert!(!is_prime(10005));
    }

    #[test]
    fn inputs_follow_the_affine_rule() {
        let g = GameInstance::new(3, 1, 2).unwrap();
        assert_eq!(g.inputs(), vec![2, 0, 1]);
    }

    #[test]
    fn two_player_inputs_are_offset_and_slope_plus_offset() {
        for slope in 0..2 {
            for offset in 0..2 {
                let g = GameInstance::new(2, slope, offset).unwrap();
                assert_eq!(g.input_of(0), offset);
                assert_eq!(g.input_of(1), (slope + offset) % 2);
            }
        }
    }

    #[test]
    fn composite_player_counts_are_rejected() {
        assert_eq!(GameInstance::new(4, 0, 0), Err(Error::NotPrime(4)));
        assert_eq!(GameInstance::new(1, 0, 0), Err(Error::NotPrime(1)));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert_eq!(GameInstance::draw(9, &mut rng), Err(Error::NotPrime(9)));
    }

    #[test]
    fn out_of_range_slope_or_offset_is_rejected() {
        assert!(matches!(
            GameInstance::new(3, 3, 0),
            Err(Error::InputOutOfRange { .. })
        ));
        assert!(matches!(
            GameInstance::new(3, 0, 5),
            Err(Error::InputOutOfRange { .. })
        ));
    }

    #[test]
    fn drawing_is_reproducible_and_covers_all_instances() {
        let mut a = ChaCha8Rng::seed_from_u64(42);
        let mut b = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            assert_eq!(
                GameInstance::draw(5, &mut a).unwrap(),
                GameInstance::draw(5, &mut b).unwrap()
            );
        }
        let mut seen = [[false; 3]; 3];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..200 {
            let g = GameInstance::draw(3, &mut rng).unwrap();
            seen[g.slope()][g.offset()] = true;
        }
        assert!(seen.iter().flatten().all(|&hit| hit));
    }

    #[test]
    fn exactly_the_slope_player_must_say_yes() {
        let g = GameInstance::new(3, 1, 0).unwrap();
        assert!(g
            .score(&AnswerVector::new(vec![false, true, false]))
            .unwrap());
        assert!(!g
            .score(&AnswerVector::new(vec![false, false, false]))
            .unwrap());
        assert!(!g
            .score(&AnswerVector::new(vec![true, true, false]))
            .unwrap());
        assert!(matches!(
            g.score(&AnswerVector::new(vec![true, false])),
            Err(Error::AnswerLengthMismatch { .. })
        ));
    }

    #[test]
    fn all_no_loses_every_instance() {
        for slope in 0..5 {
            for offset in 0..5 {
                let g = GameInstance::new(5, slope, offset).unwrap();
                assert!(!g.score(&AnswerVector::new(vec![false; 5])).unwrap());
            }
        }
    }

    // Rotating an answer vector by c moves its YES claims from position p to
    // position p - c, so a winning transcript for slope n becomes a winning
    // transcript for slope n - c, for any offset (offsets never enter the
    // score). Brute force over every answer vector for 3 and 5 players.
    #[test]
    fn rotated_transcripts_win_the_slope_shifted_instance() {
        for n in [3usize, 5] {
            for slope in 0..n {
                for offset in 0..n {
                    let g = GameInstance::new(n, slope, offset).unwrap();
                    for bits in 0..(1u32 << n) {
                        let answers =
                            AnswerVector::new((0..n).map(|k| bits >> k & 1 == 1).collect());
                        let won = g.score(&answers).unwrap();
                        for c in 0..n {
                            let shifted_slope = (slope + n - c) % n;
                            for shifted_offset in 0..n {
                                let h =
                                    GameInstance::new(n, shifted_slope, shifted_offset).unwrap();
                                assert_eq!(h.score(&answers.rotate(c)).unwrap(), won);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn swap_behavior_wins_the_strict_game_outright() {
        let ideal = BipartiteBehavior::<f64>::from_deterministic(|x, y| (y, x));
        assert!((ideal.gyni_success() - 1.0).abs() < 1e-15);
        assert!((ideal.lgyni_success() - 1.0).abs() < 1e-15);
    }

    // Outputting (0,0) regardless wins the strict game only on input (0,0):
    // the a=y check needs y=0 and the b=x check needs x=0.
    #[test]
    fn all_zeros_scores_one_quarter_strict_three_quarters_lenient() {
        let zeros = BipartiteBehavior::<f64>::from_deterministic(|_, _| (0, 0));
        assert!((zeros.gyni_success() - 0.25).abs() < 1e-15);
        assert!((zeros.lgyni_success() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn echoing_own_input_reaches_one_half_without_communication() {
        let echo = BipartiteBehavior::<f64>::from_deterministic(|x, y| (x, y));
        assert!((echo.gyni_success() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn behavior_validation_checks_blocks_and_signs() {
        let mut probs = [0.0; 16];
        probs[table_index(0, 0, 0, 0)] = 0.6;
        assert!(matches!(
            BipartiteBehavior::new(probs),
            Err(Error::NotNormalized { .. })
        ));
        let uniform = [1.0 / 4.0; 16];
        assert!(BipartiteBehavior::new(uniform).is_ok());
        let mut noisy = [1.0 / 4.0; 16];
        noisy[0] = -5e-11;
        noisy[1] = 0.5 + 5e-11;
        assert_eq!(BipartiteBehavior::new(noisy).unwrap().prob(0, 0, 0, 0), 0.0);
        let mut bad = [1.0 / 4.0; 16];
        bad[0] = -1e-3;
        assert!(matches!(
            BipartiteBehavior::new(bad),
            Err(Error::NegativeProbability { .. })
        ));
    }

    #[test]
    fn game_values_are_linear_in_the_table() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let mut p = [0.0f64; 16];
            let mut q = [0.0f64; 16];
            for block in 0..4 {
                let mut pr = [0.0; 4];
                let mut qr = [0.0; 4];
                for i in 0..4 {
                    pr[i] = rng.gen::<f64>();
                    qr[i] = rng.gen::<f64>();
                }
                let (ps, qs) = (pr.iter().sum::<f64>(), qr.iter().sum::<f64>());
                for i in 0..4 {
                    p[block * 4 + i] = pr[i] / ps;
                    q[block * 4 + i] = qr[i] / qs;
                }
            }
            let p = BipartiteBehavior::new(p).unwrap();
            let q = BipartiteBehavior::new(q).unwrap();
            let alpha: f64 = rng.gen();
            let mixed = p.mix(&q, alpha).unwrap();
            let direct = alpha * p.gyni_success() + (1.0 - alpha) * q.gyni_success();
            assert!((mixed.gyni_success() - direct).abs() < 1e-12);
            let direct = alpha * p.lgyni_success() + (1.0 - alpha) * q.lgyni_success();
            assert!((mixed.lgyni_success() - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn mixing_weight_is_validated() {
        let p = BipartiteBehavior::<f64>::from_deterministic(|_, _| (0, 0));
        assert!(matches!(
            p.mix(&p.clone(), 1.2),
            Err(Error::WeightOutOfRange(_))
        ));
    }
}
