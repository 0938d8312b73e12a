//! Buy/hold trading strategies as an Ising chain.
//!
//! An agent holds cash (`n = 0`) or the commodity (`n = 1`) at each quotation
//! time. With log returns `h_m` and a per-switch cost `j`, the energy of a
//! strategy is
//!
//! ```text
//! H(n₁, …, n_k) = −Σ_m (h_m·n_m − j·(n_{m−1} ⊕ n_m)),   n₀ = 0
//! ```
//!
//! so the lowest-energy strategy is the most profitable one. The chain is
//! solved three ways:
//!
//! * transfer matrices in the log domain give the partition function and
//!   canonical averages at inverse temperature `β`;
//! * the `β → ∞` limit of the same recursion is a (min, +) dynamic program
//!   that finds the ground state in `O(k)`;
//! * backtracking through near-optimal transitions enumerates every strategy
//!   that some future price move could still turn into the ground state.
//!
//! The final holding `n_k` is free: no closing transaction is charged.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::quantum::C64;

/// Slack for ground-state ties.
pub const GROUND_TOL: f64 = 1e-12;
/// Default cap on the number of enumerated potential ground states.
pub const DEFAULT_ENUMERATION_CAP: usize = 1 << 20;
/// Largest chain the brute-force oracles accept.
pub const BRUTE_FORCE_MAX_K: usize = 20;
/// Largest chain a [`SuperpositionStrategy`] may cover.
pub const SUPERPOSITION_MAX_K: usize = 24;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MarketError {
    #[error("price at index {index} is {value}, prices must be positive and finite")]
    InvalidPrice { index: usize, value: f64 },
    #[error("need at least {min} values, got {len}")]
    TooShort { len: usize, min: usize },
    #[error("log return at index {index} is not finite")]
    NonFiniteReturn { index: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("strategy has {found} steps but the series has {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("chain length {k} exceeds the brute-force limit {max}")]
    TooLarge { k: usize, max: usize },
    #[error("more than {cap} potential ground states; use eps = 0 or a shorter series")]
    EnumerationCap { cap: usize },
}

pub type Result<T> = std::result::Result<T, MarketError>;

/// Quoted prices `p₀, …, p_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries(Vec<f64>);

impl PriceSeries {
    pub fn new(prices: Vec<f64>) -> Result<Self> {
        if prices.len() < 2 {
            return Err(MarketError::TooShort {
                len: prices.len(),
                min: 2,
            });
        }
        if let Some(index) = prices.iter().position(|p| !(p.is_finite() && *p > 0.0)) {
            return Err(MarketError::InvalidPrice {
                index,
                value: prices[index],
            });
        }
        Ok(Self(prices))
    }

    pub fn prices(&self) -> &[f64] {
        &self.0
    }
}

/// Log returns `h_m = ln(p_m / p_{m−1})`, `m = 1…k`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogReturns(Vec<f64>);

impl LogReturns {
    pub fn new(h: Vec<f64>) -> Result<Self> {
        if h.is_empty() {
            return Err(MarketError::TooShort { len: 0, min: 1 });
        }
        if let Some(index) = h.iter().position(|x| !x.is_finite()) {
            return Err(MarketError::NonFiniteReturn { index });
        }
        Ok(Self(h))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn log_returns(prices: &PriceSeries) -> LogReturns {
    LogReturns(prices.0.windows(2).map(|w| (w[1] / w[0]).ln()).collect())
}

/// Holdings `n₁…n_k`; `true` means holding the commodity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitStrategy(Vec<bool>);

impl BitStrategy {
    pub fn new(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    pub fn cash(k: usize) -> Self {
        Self(vec![false; k])
    }

    /// Decodes `index` with `n₁` as the most significant of `k` bits.
    pub fn from_index(index: usize, k: usize) -> Self {
        Self((0..k).map(|m| (index >> (k - 1 - m)) & 1 == 1).collect())
    }

    pub fn to_index(&self) -> usize {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | usize::from(b))
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Appends one more holding.
    pub fn extended(&self, bit: bool) -> Self {
        let mut bits = self.0.clone();
        bits.push(bit);
        Self(bits)
    }
}

impl fmt::Display for BitStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitStrategy {
    type Err = MarketError;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(MarketError::InvalidParameter(format!(
                    "strategy character {other:?} is not 0 or 1"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }
}

/// Transaction cost `j ≥ 0` and inverse temperature `β > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketParams {
    j: f64,
    beta: f64,
}

impl MarketParams {
    pub fn new(j: f64, beta: f64) -> Result<Self> {
        check_cost(j)?;
        if !(beta.is_finite() && beta > 0.0) {
            return Err(MarketError::InvalidParameter(format!(
                "beta must be positive and finite, got {beta}"
            )));
        }
        Ok(Self { j, beta })
    }

    pub fn j(self) -> f64 {
        self.j
    }

    pub fn beta(self) -> f64 {
        self.beta
    }
}

fn check_cost(j: f64) -> Result<()> {
    if !(j.is_finite() && j >= 0.0) {
        return Err(MarketError::InvalidParameter(format!(
            "transaction cost j must be finite and >= 0, got {j}"
        )));
    }
    Ok(())
}

/// Energy contribution of one step `n_{m−1} → n_m`.
///
/// Every energy in this module is a left-to-right sum of these terms, so the
/// dynamic program and brute-force enumeration agree bit for bit.
#[inline]
pub fn site_energy(h: f64, j: f64, prev: bool, cur: bool) -> f64 {
    let hold = if cur { -h } else { 0.0 };
    let switch = if prev != cur { j } else { 0.0 };
    hold + switch
}

fn energy_unchecked(bits: &[bool], h: &[f64], j: f64) -> f64 {
    let mut prev = false;
    let mut e = 0.0;
    for (&cur, &hm) in bits.iter().zip(h) {
        e += site_energy(hm, j, prev, cur);
        prev = cur;
    }
    e
}

/// `H = −Σ (h_m n_m − j (n_{m−1} ⊕ n_m))` with `n₀ = 0`.
pub fn energy(s: &BitStrategy, h: &LogReturns, j: f64) -> Result<f64> {
    check_cost(j)?;
    if s.len() != h.len() {
        return Err(MarketError::LengthMismatch {
            expected: h.len(),
            found: s.len(),
        });
    }
    Ok(energy_unchecked(&s.0, &h.0, j))
}

/// One step's Boltzmann weights `M(m)[n_{m−1}][n_m] = e^{β(h_m n_m − j (n_{m−1} ⊕ n_m))}`,
/// stored as logarithms so that large `β·|h|` cannot overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    log_weights: [[f64; 2]; 2],
}

impl TransferMatrix {
    pub fn log_entry(&self, prev: bool, cur: bool) -> f64 {
        self.log_weights[usize::from(prev)][usize::from(cur)]
    }

    pub fn entry(&self, prev: bool, cur: bool) -> f64 {
        self.log_entry(prev, cur).exp()
    }

    pub fn entries(&self) -> [[f64; 2]; 2] {
        self.log_weights.map(|row| row.map(f64::exp))
    }
}

pub fn transfer_matrix(h_m: f64, j: f64, beta: f64) -> Result<TransferMatrix> {
    MarketParams::new(j, beta)?;
    if !h_m.is_finite() {
        return Err(MarketError::NonFiniteReturn { index: 0 });
    }
    let mut log_weights = [[0.0; 2]; 2];
    for prev in [false, true] {
        for cur in [false, true] {
            let n = if cur { 1.0 } else { 0.0 };
            let x = if prev != cur { 1.0 } else { 0.0 };
            log_weights[usize::from(prev)][usize::from(cur)] = beta * (h_m * n - j * x);
        }
    }
    Ok(TransferMatrix { log_weights })
}

/// `ln(eᵃ + eᵇ)`
#[inline]
fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    if a > b {
        a + (b - a).exp().ln_1p()
    } else {
        b + (a - b).exp().ln_1p()
    }
}

/// A sum of Boltzmann weights kept as `e^{−β·energy + excess}`.
///
/// `energy` is the (min, +) value of the same sum, so it is exactly the
/// ground-state recursion, and `excess ≥ 0` collects the remaining terms
/// relative to the dominant one. This is the log-domain transfer product
/// rescaled at each step by its largest term.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Weight {
    energy: f64,
    excess: f64,
}

impl Weight {
    const ONE: Weight = Weight {
        energy: 0.0,
        excess: 0.0,
    };

    fn times(self, site: f64) -> Self {
        Weight {
            energy: self.energy + site,
            excess: self.excess,
        }
    }

    fn plus(self, other: Self, beta: f64) -> Self {
        let (lo, hi) = if other.energy < self.energy {
            (other, self)
        } else {
            (self, other)
        };
        let excess = log_add_exp(lo.excess, hi.excess - beta * (hi.energy - lo.energy));
        Weight {
            energy: lo.energy,
            excess,
        }
    }

    fn ln(self, beta: f64) -> f64 {
        self.excess - beta * self.energy
    }
}

/// Forward sums over prefixes ending in each holding, `forward[m][n_m]`.
fn forward_weights(h: &[f64], j: f64, beta: f64) -> Vec<[Weight; 2]> {
    let mut fwd = Vec::with_capacity(h.len() + 1);
    let first = [false, true].map(|cur| Weight::ONE.times(site_energy(h[0], j, false, cur)));
    fwd.push(first);
    for &hm in &h[1..] {
        let last = fwd[fwd.len() - 1];
        let next = [false, true].map(|cur| {
            let from_cash = last[0].times(site_energy(hm, j, false, cur));
            let from_held = last[1].times(site_energy(hm, j, true, cur));
            from_cash.plus(from_held, beta)
        });
        fwd.push(next);
    }
    fwd
}

/// Backward sums over suffixes after each holding, `backward[m][n_m]`,
/// with `m` counted from 0 for `n₁`.
fn backward_weights(h: &[f64], j: f64, beta: f64) -> Vec<[Weight; 2]> {
    let k = h.len();
    let mut bwd = vec![[Weight::ONE; 2]; k];
    for m in (0..k - 1).rev() {
        let next = bwd[m + 1];
        bwd[m] = [false, true].map(|prev| {
            let to_cash = next[0].times(site_energy(h[m + 1], j, prev, false));
            let to_held = next[1].times(site_energy(h[m + 1], j, prev, true));
            to_cash.plus(to_held, beta)
        });
    }
    bwd
}

fn total(fwd: &[[Weight; 2]], beta: f64) -> Weight {
    let last = fwd[fwd.len() - 1];
    last[0].plus(last[1], beta)
}

/// `ln Z` for `Z = Σ_s e^{−β H(s)}`, the sum over all `2^k` strategies of
/// products of transfer-matrix entries starting from `n₀ = 0`.
pub fn partition_function(h: &LogReturns, params: MarketParams) -> f64 {
    total(&forward_weights(&h.0, params.j, params.beta), params.beta).ln(params.beta)
}

/// Canonical averages under the weights `e^{−βH}/Z`.
#[derive(Debug, Clone, PartialEq)]
pub struct Thermodynamics {
    pub log_partition: f64,
    /// `F = −ln Z / β`
    pub free_energy: f64,
    pub mean_energy: f64,
    /// `⟨n_m⟩` for `m = 1…k`.
    pub occupations: Vec<f64>,
}

pub fn thermodynamics(h: &LogReturns, params: MarketParams) -> Thermodynamics {
    let (hs, j, beta) = (&h.0[..], params.j, params.beta);
    let fwd = forward_weights(hs, j, beta);
    let bwd = backward_weights(hs, j, beta);
    let z = total(&fwd, beta);

    // log of (weight of a restricted sum) / Z, kept relative to the ground energy.
    let relative =
        |energy: f64, excess: f64| (excess - z.excess - beta * (energy - z.energy)).exp();

    let occupations = fwd
        .iter()
        .zip(&bwd)
        .map(|(f, b)| {
            relative(f[1].energy + b[1].energy, f[1].excess + b[1].excess).clamp(0.0, 1.0)
        })
        .collect();

    let mut mean_energy = 0.0;
    for (m, &hm) in hs.iter().enumerate() {
        for cur in [false, true] {
            let after = bwd[m][usize::from(cur)];
            for prev in [false, true] {
                let before = if m == 0 {
                    if prev {
                        continue;
                    }
                    Weight::ONE
                } else {
                    fwd[m - 1][usize::from(prev)]
                };
                let site = site_energy(hm, j, prev, cur);
                let p = relative(
                    before.energy + site + after.energy,
                    before.excess + after.excess,
                );
                mean_energy += p * site;
            }
        }
    }

    Thermodynamics {
        log_partition: z.ln(beta),
        // E* − excess/β never exceeds the ground energy.
        free_energy: z.energy - z.excess / beta,
        mean_energy,
        occupations,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    pub energy: f64,
    pub strategy: BitStrategy,
}

/// Lowest-energy strategy by (min, +) dynamic programming over the two
/// holdings. Ties go to cash, deciding from the last step backwards.
pub fn ground_state(h: &LogReturns, j: f64) -> Result<GroundState> {
    check_cost(j)?;
    let hs = &h.0;
    let k = hs.len();
    // came_from_held[m][cur]: the best predecessor of n_{m+1} = cur holds.
    let mut came_from_held = Vec::with_capacity(k);
    let mut cost = [false, true].map(|cur| 0.0 + site_energy(hs[0], j, false, cur));
    came_from_held.push([false, false]);
    for &hm in &hs[1..] {
        let mut next = [0.0; 2];
        let mut choice = [false; 2];
        for cur in [false, true] {
            let c = usize::from(cur);
            let via_cash = cost[0] + site_energy(hm, j, false, cur);
            let via_held = cost[1] + site_energy(hm, j, true, cur);
            choice[c] = via_held < via_cash;
            next[c] = if choice[c] { via_held } else { via_cash };
        }
        cost = next;
        came_from_held.push(choice);
    }

    let mut bits = vec![false; k];
    let mut cur = cost[1] < cost[0];
    let energy = cost[usize::from(cur)];
    for m in (0..k).rev() {
        bits[m] = cur;
        cur = came_from_held[m][usize::from(cur)];
    }
    Ok(GroundState {
        energy,
        strategy: BitStrategy(bits),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceGround {
    pub energy: f64,
    /// Every strategy attaining `energy` exactly, in lexicographic order.
    pub strategies: Vec<BitStrategy>,
}

fn check_brute_force_size(k: usize) -> Result<()> {
    if k > BRUTE_FORCE_MAX_K {
        return Err(MarketError::TooLarge {
            k,
            max: BRUTE_FORCE_MAX_K,
        });
    }
    Ok(())
}

/// Energies of all `2^k` strategies, indexed by [`BitStrategy::to_index`].
fn all_energies(h: &[f64], j: f64) -> Vec<f64> {
    let k = h.len();
    let mut bits = vec![false; k];
    (0..1usize << k)
        .map(|index| {
            for (m, b) in bits.iter_mut().enumerate() {
                *b = (index >> (k - 1 - m)) & 1 == 1;
            }
            energy_unchecked(&bits, h, j)
        })
        .collect()
}

/// Exhaustive minimum over all `2^k` strategies; refuses `k > 20`.
pub fn brute_force_ground(h: &LogReturns, j: f64) -> Result<BruteForceGround> {
    check_cost(j)?;
    check_brute_force_size(h.len())?;
    let energies = all_energies(&h.0, j);
    let energy = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let strategies = energies
        .iter()
        .enumerate()
        .filter(|&(_, &e)| e == energy)
        .map(|(i, _)| BitStrategy::from_index(i, h.len()))
        .collect();
    Ok(BruteForceGround { energy, strategies })
}

/// Strategies that are optimal for the data so far under some continuation.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundReport {
    /// Ground energy `E*`.
    pub energy: f64,
    /// Lowest energy among strategies ending in cash and in the commodity.
    pub endpoint_energies: [f64; 2],
    /// Reported strategies within `eps` of `E*`.
    pub ground_states: Vec<BitStrategy>,
    /// All potential ground states, in lexicographic order.
    pub potential_ground_states: Vec<BitStrategy>,
    /// Length of the tail on which potential ground states disagree.
    pub coherence_depth: usize,
    /// Final holdings that some continuation can favor.
    pub viable_endpoints: Vec<bool>,
}

pub fn potential_ground_states(h: &LogReturns, j: f64, eps: f64) -> Result<GroundReport> {
    potential_ground_states_with_cap(h, j, eps, DEFAULT_ENUMERATION_CAP)
}

/// Enumerates potential ground states.
///
/// With `V_s` the lowest energy among strategies ending in holding `s`, a
/// strategy ending in `s` is reported when its energy is within `eps` of
/// `V_s` and `V_s ≤ V_{1−s} + j + eps`. The second condition is the endpoint
/// test: one more step can shift the balance between the two endpoints by
/// at most one switching cost. Strategies are found by walking backwards
/// through transitions that keep the total within budget.
pub fn potential_ground_states_with_cap(
    h: &LogReturns,
    j: f64,
    eps: f64,
    cap: usize,
) -> Result<GroundReport> {
    check_cost(j)?;
    if !(eps.is_finite() && eps >= 0.0) {
        return Err(MarketError::InvalidParameter(format!(
            "eps must be finite and >= 0, got {eps}"
        )));
    }
    let hs = &h.0;
    let k = hs.len();
    // β only weights the excess terms, which are unused here.
    let fwd = forward_weights(hs, j, 1.0);
    let best_before = |m: usize, held: bool| -> f64 {
        if m == 0 {
            if held {
                f64::INFINITY
            } else {
                0.0
            }
        } else {
            fwd[m - 1][usize::from(held)].energy
        }
    };
    let endpoint_energies = [fwd[k - 1][0].energy, fwd[k - 1][1].energy];
    let ground = endpoint_energies[0].min(endpoint_energies[1]);
    let slack = eps + GROUND_TOL;

    let viable_endpoints: Vec<bool> = [false, true]
        .into_iter()
        .filter(|&s| {
            endpoint_energies[usize::from(s)] <= endpoint_energies[usize::from(!s)] + j + slack
        })
        .collect();

    let mut found: Vec<(BitStrategy, f64)> = Vec::new();
    let mut bits = vec![false; k];
    for &end in &viable_endpoints {
        let budget = endpoint_energies[usize::from(end)] + slack;
        // (number of fixed holdings m, holding n_m, energy of steps after m)
        let mut stack = vec![(k, end, 0.0f64)];
        while let Some((m, held, suffix)) = stack.pop() {
            bits[m - 1] = held;
            if m == 1 {
                if found.len() == cap {
                    return Err(MarketError::EnumerationCap { cap });
                }
                found.push((
                    BitStrategy(bits.clone()),
                    site_energy(hs[0], j, false, held) + suffix,
                ));
                continue;
            }
            for prev in [true, false] {
                let tail = suffix + site_energy(hs[m - 1], j, prev, held);
                if best_before(m - 1, prev) + tail <= budget {
                    stack.push((m - 1, prev, tail));
                }
            }
        }
    }
    found.sort_by(|a, b| a.0.cmp(&b.0));

    let ground_states = found
        .iter()
        .filter(|(_, e)| *e <= ground + slack)
        .map(|(s, _)| s.clone())
        .collect();
    let potential: Vec<BitStrategy> = found.into_iter().map(|(s, _)| s).collect();
    let common = match (potential.first(), potential.last()) {
        (Some(a), Some(b)) => a.0.iter().zip(&b.0).take_while(|(x, y)| x == y).count(),
        _ => k,
    };

    Ok(GroundReport {
        energy: ground,
        endpoint_energies,
        ground_states,
        potential_ground_states: potential,
        coherence_depth: k - common,
        viable_endpoints,
    })
}

/// Brute-force check that `s` can still become the ground state.
///
/// Tries one more step with `h_{k+1} ∈ {−B, 0, B}`, `B = j + max|h_m| + 1`,
/// and either final holding, and asks whether the extended strategy is a
/// ground state (within [`GROUND_TOL`]) of the extended chain.
pub fn verify_potential_extension(s: &BitStrategy, h: &LogReturns, j: f64) -> Result<bool> {
    check_cost(j)?;
    check_brute_force_size(h.len())?;
    if s.len() != h.len() {
        return Err(MarketError::LengthMismatch {
            expected: h.len(),
            found: s.len(),
        });
    }
    let bound = j + h.0.iter().fold(0.0f64, |acc, x| acc.max(x.abs())) + 1.0;
    for future in [-bound, 0.0, bound] {
        let mut extended = h.0.clone();
        extended.push(future);
        let ground = all_energies(&extended, j)
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        for last in [false, true] {
            if energy_unchecked(&s.extended(last).0, &extended, j) <= ground + GROUND_TOL {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Amplitudes over all `2^k` strategies, indexed by [`BitStrategy::to_index`].
#[derive(Debug, Clone, PartialEq)]
pub struct SuperpositionStrategy {
    amplitudes: Vec<C64>,
    k: usize,
}

impl SuperpositionStrategy {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(MarketError::InvalidParameter(format!(
                "{len} amplitudes is not 2^k for k >= 1"
            )));
        }
        let k = len.trailing_zeros() as usize;
        if k > SUPERPOSITION_MAX_K {
            return Err(MarketError::TooLarge {
                k,
                max: SUPERPOSITION_MAX_K,
            });
        }
        let norm_sqr: f64 = amplitudes.iter().map(C64::norm_sqr).sum();
        if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > crate::quantum::VALIDATION_TOL {
            return Err(MarketError::InvalidParameter(format!(
                "amplitudes are not normalized: sum |c|^2 = {norm_sqr}"
            )));
        }
        Ok(Self { amplitudes, k })
    }

    pub fn uniform(k: usize) -> Result<Self> {
        if k > SUPERPOSITION_MAX_K {
            return Err(MarketError::TooLarge {
                k,
                max: SUPERPOSITION_MAX_K,
            });
        }
        let n = 1usize << k;
        Self::new(vec![C64::new(1.0 / (n as f64).sqrt(), 0.0); n])
    }

    pub fn basis(s: &BitStrategy) -> Result<Self> {
        if s.is_empty() || s.len() > SUPERPOSITION_MAX_K {
            return Err(MarketError::TooLarge {
                k: s.len(),
                max: SUPERPOSITION_MAX_K,
            });
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); 1 << s.len()];
        amplitudes[s.to_index()] = C64::new(1.0, 0.0);
        Ok(Self {
            amplitudes,
            k: s.len(),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuperpositionEnergy {
    pub expected_energy: f64,
    /// Lowest-energy strategy with `|c|² > 1e−12`; ties go to the smaller index.
    pub best_support: BitStrategy,
}

/// The Hamiltonian is diagonal in the strategy basis, so the expectation is
/// `Σ_s |c_s|² H(s)`.
pub fn superposition_energy(
    psi: &SuperpositionStrategy,
    h: &LogReturns,
    j: f64,
) -> Result<SuperpositionEnergy> {
    check_cost(j)?;
    if psi.k != h.len() {
        return Err(MarketError::LengthMismatch {
            expected: h.len(),
            found: psi.k,
        });
    }
    let energies = all_energies(&h.0, j);
    let mut expected_energy = 0.0;
    let mut best: Option<(usize, f64)> = None;
    for (index, (c, &e)) in psi.amplitudes.iter().zip(&energies).enumerate() {
        let w = c.norm_sqr();
        expected_energy += w * e;
        if w > 1e-12 && best.is_none_or(|(_, be)| e < be) {
            best = Some((index, e));
        }
    }
    let (index, _) = best.expect("a normalized state has nonzero support");
    Ok(SuperpositionEnergy {
        expected_energy,
        best_support: BitStrategy::from_index(index, psi.k),
    })
}
