//! Classical limits of the guessing games.
//!
//! Bipartite side: the deterministic one-way strategies (one side may see
//! both inputs, the other only its own) span a polytope of 112 vertices.
//! Game maxima are found by exhaustive enumeration in exact rational
//! arithmetic, and membership in the polytope is decided by an exact
//! convex-combination search, which doubles as a certificate that the
//! quantum behavior lies outside.
//!
//! `N`-party side: players sit on a regular polygon of diameter `d` and may
//! relay one information-carrying token within a flight budget of `d`. A
//! through-center relay reaches any single receiver; edge relays reach up to
//! `k_max = floor(1 / sin(pi/N))` successive neighbors. Strategies are
//! response tables over whatever inputs a player has seen; optima come from
//! exhaustive enumeration (small `N`) or randomized sampling.

use std::collections::HashSet;
use std::f64::consts::PI;

use num_rational::{BigRational, Rational64};
use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::games::{gyni_win, is_prime, lgyni_win, AnswerVector, BipartiteBehavior, GameInstance};
use crate::scalar::Scalar;

mod simplex;

/// The two bipartite win conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BipartiteGame {
    Gyni,
    Lgyni,
}

impl BipartiteGame {
    fn win(self, x: u8, y: u8, a: u8, b: u8) -> bool {
        match self {
            BipartiteGame::Gyni => gyni_win(x, y, a, b),
            BipartiteGame::Lgyni => lgyni_win(x, y, a, b),
        }
    }
}

/// Who sees both inputs: `AtoB` lets the receiver B depend on `x` and `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    AtoB,
    BtoA,
}

/// Deterministic one-way bipartite strategy: the sender answers from its own
/// input, the receiver from both. `receiver_table[sender input][own input]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OneWayStrategy {
    pub direction: Direction,
    pub sender_table: [u8; 2],
    pub receiver_table: [[u8; 2]; 2],
}

impl OneWayStrategy {
    pub fn outputs(&self, x: u8, y: u8) -> (u8, u8) {
        match self.direction {
            Direction::AtoB => (
                self.sender_table[x as usize],
                self.receiver_table[x as usize][y as usize],
            ),
            Direction::BtoA => (
                self.receiver_table[y as usize][x as usize],
                self.sender_table[y as usize],
            ),
        }
    }

    pub fn behavior<T: Scalar>(&self) -> BipartiteBehavior<T> {
        BipartiteBehavior::from_deterministic(|x, y| self.outputs(x, y))
    }

    /// All 128 deterministic one-way strategies, both directions.
    pub fn all() -> Vec<OneWayStrategy> {
        let mut out = Vec::with_capacity(128);
        for direction in [Direction::AtoB, Direction::BtoA] {
            for s in 0..4u8 {
                for r in 0..16u8 {
                    out.push(OneWayStrategy {
                        direction,
                        sender_table: [s & 1, s >> 1 & 1],
                        receiver_table: [[r & 1, r >> 1 & 1], [r >> 2 & 1, r >> 3 & 1]],
                    });
                }
            }
        }
        out
    }

    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> OneWayStrategy {
        let direction = if rng.gen::<bool>() {
            Direction::AtoB
        } else {
            Direction::BtoA
        };
        OneWayStrategy {
            direction,
            sender_table: [rng.gen_range(0..2), rng.gen_range(0..2)],
            receiver_table: [
                [rng.gen_range(0..2), rng.gen_range(0..2)],
                [rng.gen_range(0..2), rng.gen_range(0..2)],
            ],
        }
    }

    fn wins(&self, game: BipartiteGame) -> i64 {
        let mut wins = 0;
        for x in 0..2u8 {
            for y in 0..2u8 {
                let (a, b) = self.outputs(x, y);
                if game.win(x, y, a, b) {
                    wins += 1;
                }
            }
        }
        wins
    }
}

/// Exact maximum of the game value over all deterministic one-way
/// strategies; by linearity this is also the maximum over their mixtures.
pub fn enumerate_bipartite_max(game: BipartiteGame) -> Rational64 {
    let best = OneWayStrategy::all()
        .iter()
        .map(|s| s.wins(game))
        .max()
        .unwrap();
    Rational64::new(best, 4)
}

/// Same maximum restricted to product strategies `a = f(x)`, `b = h(y)`
/// (no communication at all).
pub fn enumerate_bipartite_product_max(game: BipartiteGame) -> Rational64 {
    let mut best = 0;
    for f in 0..4u8 {
        for h in 0..4u8 {
            let mut wins = 0;
            for x in 0..2u8 {
                for y in 0..2u8 {
                    let a = f >> x & 1;
                    let b = h >> y & 1;
                    if game.win(x, y, a, b) {
                        wins += 1;
                    }
                }
            }
            best = best.max(wins);
        }
    }
    Rational64::new(best, 4)
}

/// The distinct one-way behavior tables with a representative strategy each.
/// Product strategies arise in both directions, so 128 strategies collapse
/// to 112 vertices.
pub fn one_way_vertices() -> Vec<(OneWayStrategy, [u8; 16])> {
    let mut seen = HashSet::new();
    let mut verts = Vec::new();
    for s in OneWayStrategy::all() {
        let table = s.behavior::<f64>().table().map(|v| v as u8);
        if seen.insert(table) {
            verts.push((s, table));
        }
    }
    verts
}

/// Exact convex mixture of one-way vertices reproducing a behavior.
#[derive(Debug, Clone)]
pub struct OneWayDecomposition {
    lambda: BigRational,
    components: Vec<(OneWayStrategy, BigRational)>,
}

impl OneWayDecomposition {
    /// Total weight on components where A sends to B. Mixtures are not
    /// unique, so this is one valid split, not a canonical one.
    pub fn lambda(&self) -> &BigRational {
        &self.lambda
    }

    pub fn components(&self) -> &[(OneWayStrategy, BigRational)] {
        &self.components
    }

    /// Reconstructs the 16-entry table this decomposition mixes to.
    pub fn mixture_table(&self) -> [BigRational; 16] {
        let mut out: [BigRational; 16] = std::array::from_fn(|_| BigRational::zero());
        for (strategy, weight) in &self.components {
            for (o, &v) in out.iter_mut().zip(strategy.behavior::<f64>().table()) {
                if v == 1.0 {
                    *o += weight;
                }
            }
        }
        out
    }
}

/// Decides, in exact arithmetic, whether a behavior is a convex mixture of
/// the deterministic one-way vertices, returning a witness mixture if so and
/// `None` if the behavior signals both ways.
///
/// Entries are taken at exact floating-point value. Tables produced by
/// floating-point mixing can therefore fall a rounding error outside the
/// polytope; build such tables from dyadic weights when an exact verdict is
/// needed.
pub fn decompose_one_way<T: Scalar>(
    behavior: &BipartiteBehavior<T>,
) -> Result<Option<OneWayDecomposition>> {
    let mut target = Vec::with_capacity(16);
    for p in behavior.table() {
        let f = p.to_f64().unwrap_or(f64::NAN);
        match BigRational::from_float(f) {
            Some(r) => target.push(r),
            None => return Err(Error::NotRationalizable { value: f }),
        }
    }
    let verts = one_way_vertices();
    let columns: Vec<Vec<BigRational>> = verts
        .iter()
        .map(|(_, t)| t.iter().map(|&b| BigRational::from_integer(b.into())).collect())
        .collect();
    let Some(weights) = simplex::convex_weights(&columns, &target) else {
        return Ok(None);
    };
    let mut lambda = BigRational::zero();
    let mut components = Vec::new();
    for ((strategy, _), weight) in verts.into_iter().zip(weights) {
        if weight.is_zero() {
            continue;
        }
        if strategy.direction == Direction::AtoB {
            lambda += &weight;
        }
        components.push((strategy, weight));
    }
    Ok(Some(OneWayDecomposition { lambda, components }))
}

/// Maximum number of polygon-edge hops a token can make within a flight
/// budget of one diameter: `floor(1 / sin(pi/N))`.
///
/// The floor is re-evaluated under a relative perturbation of 1e-12 in each
/// direction; if the two disagree the value sits on a boundary that double
/// precision cannot resolve and an error is returned instead of a guess
/// (N = 6 lands exactly on such a boundary). Both candidates are clamped to
/// at least 1, since `1/sin(pi/N) >= 1` holds exactly for every N >= 2 and
/// the downward perturbation must not tunnel below that.
pub fn k_max(n_players: usize) -> Result<usize> {
    if n_players < 2 {
        return Err(Error::BadModulus(n_players));
    }
    let v = 1.0 / (PI / n_players as f64).sin();
    let lo = (v * (1.0 - 1e-12)).floor().max(1.0);
    let hi = (v * (1.0 + 1e-12)).floor().max(1.0);
    if lo != hi {
        return Err(Error::HopCountAmbiguous { n_players });
    }
    Ok(lo as usize)
}

fn chord(n_players: usize, i: usize, j: usize, diameter: f64) -> f64 {
    let diff = i.abs_diff(j);
    let delta = diff.min(n_players - diff);
    diameter * (PI * delta as f64 / n_players as f64).sin()
}

/// Whether a token can traverse `path` (vertex indices, consecutive legs as
/// straight chords) within one diameter of flight. A through-center relay is
/// not a vertex path; it always consumes exactly one diameter.
pub fn path_feasible(n_players: usize, path: &[usize], circumradius: f64) -> Result<bool> {
    if n_players < 2 {
        return Err(Error::BadModulus(n_players));
    }
    for &v in path {
        if v >= n_players {
            return Err(Error::PlayerOutOfRange {
                index: v,
                n_players,
            });
        }
    }
    let d = 2.0 * circumradius;
    let total: f64 = path
        .windows(2)
        .map(|w| chord(n_players, w[0], w[1], d))
        .sum();
    Ok(total <= d * (1.0 + 1e-12))
}

/// Reference success rate of through-center relaying, `1/N`: the destination
/// learns the full line and answers exactly, everyone else stays blind.
pub fn center_routing_bound(n_players: usize) -> Result<Rational64> {
    if !is_prime(n_players) {
        return Err(Error::NotPrime(n_players));
    }
    Ok(Rational64::new(1, n_players as i64))
}

/// Success rate of edge relaying, `k_max/N`: each of the `k_max` informed
/// receivers resolves one slope candidate. Never below `1/N` since
/// `k_max >= 1`.
pub fn edge_routing_bound(n_players: usize) -> Result<Rational64> {
    if !is_prime(n_players) {
        return Err(Error::NotPrime(n_players));
    }
    Ok(Rational64::new(k_max(n_players)? as i64, n_players as i64))
}

/// Polygon summary: hop budget, relay success and distance to the
/// large-`N` limit `1/pi`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometryReport {
    pub n_players: usize,
    pub k_max: usize,
    pub classical_success: Rational64,
    pub asymptote_gap: f64,
}

pub fn geometry_report(n_players: usize) -> Result<GeometryReport> {
    let k = k_max(n_players)?;
    Ok(GeometryReport {
        n_players,
        k_max: k,
        classical_success: Rational64::new(k as i64, n_players as i64),
        asymptote_gap: k as f64 / n_players as f64 - 1.0 / PI,
    })
}

/// How the token travels: straight through the center to one destination
/// (exactly one diameter of flight), or along successive polygon edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Route {
    ThroughCenter { destination: usize },
    EdgePath { stops: Vec<usize> },
}

/// Deterministic relay strategy for the `N`-party game: a holder encodes its
/// input on the token, the route fixes who reads it, and every player maps
/// what they have seen to a YES/NO answer.
///
/// `tables[p]` is indexed by the inputs player `p` knows, most significant
/// first in visit order and own input last: a player off the route knows
/// only its own input (table length `N`), the through-center destination
/// knows the holder's and its own (length `N^2`), the `i`-th edge stop knows
/// the holder's, every earlier stop's and its own (length `N^(i+2)`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalStrategy {
    n_players: usize,
    holder: usize,
    route: Route,
    tables: Vec<Vec<bool>>,
}

impl ClassicalStrategy {
    pub fn new(
        n_players: usize,
        holder: usize,
        route: Route,
        tables: Vec<Vec<bool>>,
    ) -> Result<Self> {
        if !is_prime(n_players) {
            return Err(Error::NotPrime(n_players));
        }
        if holder >= n_players {
            return Err(Error::PlayerOutOfRange {
                index: holder,
                n_players,
            });
        }
        match &route {
            Route::ThroughCenter { destination } => {
                if *destination >= n_players {
                    return Err(Error::PlayerOutOfRange {
                        index: *destination,
                        n_players,
                    });
                }
            }
            Route::EdgePath { stops } => {
                let mut full = Vec::with_capacity(stops.len() + 1);
                full.push(holder);
                full.extend_from_slice(stops);
                for &v in stops {
                    if v >= n_players {
                        return Err(Error::PlayerOutOfRange {
                            index: v,
                            n_players,
                        });
                    }
                }
                for w in full.windows(2) {
                    let diff = w[0].abs_diff(w[1]);
                    if diff.min(n_players - diff) != 1 {
                        return Err(Error::HopNotAdjacent {
                            from: w[0],
                            to: w[1],
                        });
                    }
                }
                let mut seen = HashSet::new();
                for &v in &full {
                    if !seen.insert(v) {
                        return Err(Error::DuplicateVisit { vertex: v });
                    }
                }
                if !path_feasible(n_players, &full, 0.5)? {
                    return Err(Error::PathBudgetExceeded);
                }
            }
        }
        if tables.len() != n_players {
            return Err(Error::DimensionMismatch {
                expected: n_players,
                got: tables.len(),
            });
        }
        let strategy = Self {
            n_players,
            holder,
            route,
            tables,
        };
        for p in 0..n_players {
            let depth = strategy.sources_of(p).len() as u32 + 1;
            let expected = (n_players as u64)
                .checked_pow(depth)
                .and_then(|v| usize::try_from(v).ok())
                .ok_or(Error::EnumerationTooLarge { n_players })?;
            if strategy.tables[p].len() != expected {
                return Err(Error::DimensionMismatch {
                    expected,
                    got: strategy.tables[p].len(),
                });
            }
        }
        Ok(strategy)
    }

    pub fn n_players(&self) -> usize {
        self.n_players
    }

    pub fn holder(&self) -> usize {
        self.holder
    }

    pub fn route(&self) -> &Route {
        &self.route
    }

    /// Players whose inputs `p` has read off the token before answering,
    /// in visit order, own input excluded. Empty off the route; the initial
    /// holder reads nothing.
    pub fn sources_of(&self, p: usize) -> Vec<usize> {
        match &self.route {
            Route::ThroughCenter { destination } => {
                if p == *destination {
                    vec![self.holder]
                } else {
                    Vec::new()
                }
            }
            Route::EdgePath { stops } => match stops.iter().position(|&s| s == p) {
                Some(i) => {
                    let mut known = Vec::with_capacity(i + 1);
                    known.push(self.holder);
                    known.extend_from_slice(&stops[..i]);
                    known
                }
                None => Vec::new(),
            },
        }
    }

    fn answer(&self, p: usize, instance: &GameInstance) -> bool {
        let n = self.n_players;
        let mut idx = 0;
        for src in self.sources_of(p) {
            idx = idx * n + instance.input_of(src);
        }
        idx = idx * n + instance.input_of(p);
        self.tables[p][idx]
    }

    pub fn play(&self, instance: &GameInstance) -> Result<AnswerVector> {
        if instance.n_players() != self.n_players {
            return Err(Error::DimensionMismatch {
                expected: self.n_players,
                got: instance.n_players(),
            });
        }
        Ok(AnswerVector::new(
            (0..self.n_players)
                .map(|p| self.answer(p, instance))
                .collect(),
        ))
    }

    /// Exact win rate over the uniform instance distribution.
    pub fn success_probability(&self) -> Rational64 {
        let n = self.n_players;
        let mut wins = 0i64;
        for slope in 0..n {
            for offset in 0..n {
                let instance = GameInstance::new(n, slope, offset).unwrap();
                if (0..n).all(|p| self.answer(p, &instance) == (p == slope)) {
                    wins += 1;
                }
            }
        }
        Rational64::new(wins, (n * n) as i64)
    }

    /// Uniformly random through-center strategy: random holder, destination
    /// and response tables.
    pub fn sample_through_center<R: Rng + ?Sized>(n_players: usize, rng: &mut R) -> Result<Self> {
        if !is_prime(n_players) {
            return Err(Error::NotPrime(n_players));
        }
        let holder = rng.gen_range(0..n_players);
        let destination = rng.gen_range(0..n_players);
        let tables = (0..n_players)
            .map(|p| {
                let len = if p == destination {
                    n_players * n_players
                } else {
                    n_players
                };
                (0..len).map(|_| rng.gen()).collect()
            })
            .collect();
        Self::new(
            n_players,
            holder,
            Route::ThroughCenter { destination },
            tables,
        )
    }
}

/// Result of the exhaustive through-center search: the optimum and one
/// strategy attaining it.
#[derive(Debug, Clone)]
pub struct CenterOptimum {
    pub value: Rational64,
    pub witness: ClassicalStrategy,
}

/// Exhaustive search over every deterministic through-center strategy:
/// holder, destination, the destination's table over (holder input, own
/// input) and each other player's table over its own input. Capped at 3
/// players; the space grows doubly exponentially.
pub fn enumerate_center_max(n_players: usize) -> Result<CenterOptimum> {
    if !is_prime(n_players) {
        return Err(Error::NotPrime(n_players));
    }
    if n_players > 3 {
        return Err(Error::EnumerationTooLarge { n_players });
    }
    let n = n_players;
    let nn = n * n;
    let mut best: Option<(u32, usize, usize, u32, u32)> = None;
    for holder in 0..n {
        for dest in 0..n {
            let blind: Vec<usize> = (0..n).filter(|&p| p != dest).collect();
            let instances: Vec<(usize, usize, Vec<usize>)> = (0..n)
                .flat_map(|slope| {
                    (0..n).map(move |offset| {
                        let x: Vec<usize> = (0..n).map(|k| (slope * k + offset) % n).collect();
                        (slope, x[holder] * n + x[dest], x)
                    })
                })
                .collect();
            for informed_mask in 0u32..1 << nn {
                let informed_ok: Vec<bool> = instances
                    .iter()
                    .map(|(slope, idx, _)| (informed_mask >> idx & 1 == 1) == (*slope == dest))
                    .collect();
                for joint in 0u32..1 << (blind.len() * n) {
                    let mut wins = 0u32;
                    'instance: for (i, (slope, _, x)) in instances.iter().enumerate() {
                        if !informed_ok[i] {
                            continue;
                        }
                        for (u, &p) in blind.iter().enumerate() {
                            if (joint >> (u * n + x[p]) & 1 == 1) != (*slope == p) {
                                continue 'instance;
                            }
                        }
                        wins += 1;
                    }
                    if best.map_or(true, |(w, ..)| wins > w) {
                        best = Some((wins, holder, dest, informed_mask, joint));
                    }
                }
            }
        }
    }
    let (wins, holder, dest, informed_mask, joint) = best.unwrap();
    let blind: Vec<usize> = (0..n).filter(|&p| p != dest).collect();
    let tables = (0..n)
        .map(|p| {
            if p == dest {
                (0..nn).map(|i| informed_mask >> i & 1 == 1).collect()
            } else {
                let u = blind.iter().position(|&q| q == p).unwrap();
                (0..n).map(|x| joint >> (u * n + x) & 1 == 1).collect()
            }
        })
        .collect();
    let witness = ClassicalStrategy::new(n, holder, Route::ThroughCenter { destination: dest }, tables)?;
    let value = witness.success_probability();
    debug_assert_eq!(value, Rational64::new(wins as i64, nn as i64));
    Ok(CenterOptimum { value, witness })
}

/// Best success rate seen over `samples` uniformly random through-center
/// strategies.
pub fn sample_center_max<R: Rng + ?Sized>(
    n_players: usize,
    samples: usize,
    rng: &mut R,
) -> Result<Rational64> {
    let mut best = Rational64::new(0, 1);
    for _ in 0..samples {
        let s = ClassicalStrategy::sample_through_center(n_players, rng)?;
        best = best.max(s.success_probability());
    }
    Ok(best)
}

fn mod_inverse(a: usize, n: usize) -> usize {
    let mut result = 1;
    let mut base = a % n;
    let mut e = n - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % n;
        }
        base = base * base % n;
        e >>= 1;
    }
    result
}

/// Through-center strategy winning `(2N - 2)/N^2` rounds: the informed
/// destination answers exactly, and every blind player guesses YES on the
/// single input value aligned so that all their veto conditions coincide on
/// one offset.
///
/// Holder 0 relays to destination `d = N - 1`. The destination recovers the
/// slope from `(x_d - x_0) / d`. A blind player `k` says YES iff
/// `x_k = d k (mod N)`: for each slope `s != d` exactly the offset
/// `m = s(d - s)` makes every blind answer correct, and for slope `d` every
/// offset except `m = 0` wins.
pub fn aligned_center_strategy(n_players: usize) -> Result<ClassicalStrategy> {
    if !is_prime(n_players) {
        return Err(Error::NotPrime(n_players));
    }
    let n = n_players;
    let dest = n - 1;
    let inv = mod_inverse(dest, n);
    let tables = (0..n)
        .map(|p| {
            if p == dest {
                let mut t = vec![false; n * n];
                for xh in 0..n {
                    for xo in 0..n {
                        let slope = (xo + n - xh) % n * inv % n;
                        t[xh * n + xo] = slope == dest;
                    }
                }
                t
            } else {
                (0..n).map(|x| x == dest * p % n).collect()
            }
        })
        .collect();
    ClassicalStrategy::new(n, 0, Route::ThroughCenter { destination: dest }, tables)
}
