//! ORBGRAND noise-effect generation and the GRAND guess loop.
//!
//! Bit positions are ranked 1..=n from least to most reliable. A candidate
//! noise effect is a set of ranks to flip; its logistic weight is the sum of
//! those ranks. Candidates are produced in nondecreasing logistic weight, so
//! the patterns of weight `L` are exactly the partitions of `L` into distinct
//! parts no larger than `n`.
//!
//! Within one weight the generator walks partitions by number of parts
//! (fewest first). For a fixed number of parts it starts at the most balanced
//! partition (largest smallest part) and steps to the lexicographic
//! predecessor, pushing mass toward the smallest and largest parts, until it
//! reaches `1, 2, .., m - 1, L - m(m - 1)/2`. The cursor is a partition, not
//! a list, so enumeration is incremental.

use std::fmt;
use std::str::FromStr;

use crate::bits::{BitBlock, BitWord};
use crate::channel::SoftVector;
use crate::Error;

/// Default abandonment threshold, counted in membership queries.
pub const DEFAULT_MAX_QUERIES: u64 = 1 << 16;

/// Rank to bit-position mapping sorted by ascending reliability.
#[derive(Debug, Clone, PartialEq)]
pub struct ReliabilityOrder {
    positions: Vec<usize>,
    reliabilities: Vec<f64>,
}

impl ReliabilityOrder {
    /// Sorts positions by ascending reliability; ties keep ascending position.
    pub fn from_reliabilities(reliabilities: &[f64]) -> Self {
        let mut positions: Vec<usize> = (0..reliabilities.len()).collect();
        positions.sort_by(|&a, &b| reliabilities[a].total_cmp(&reliabilities[b]));
        let sorted = positions.iter().map(|&p| reliabilities[p]).collect();
        ReliabilityOrder {
            positions,
            reliabilities: sorted,
        }
    }

    /// Identity order over `n` positions.
    pub fn identity(n: usize) -> Self {
        ReliabilityOrder {
            positions: (0..n).collect(),
            reliabilities: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Bit position holding 1-based `rank`.
    #[inline]
    pub fn position(&self, rank: usize) -> usize {
        self.positions[rank - 1]
    }

    /// 1-based rank of `position`.
    pub fn rank_of(&self, position: usize) -> usize {
        self.positions
            .iter()
            .position(|&p| p == position)
            .expect("position out of range")
            + 1
    }

    /// Reliabilities in rank order (nondecreasing).
    pub fn sorted_reliabilities(&self) -> &[f64] {
        &self.reliabilities
    }
}

pub fn rank_by_reliability(soft: &SoftVector) -> ReliabilityOrder {
    ReliabilityOrder::from_reliabilities(&soft.reliabilities())
}

/// A noise effect as a strictly increasing set of 1-based ranks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ErrorPattern {
    ranks: Vec<usize>,
}

impl ErrorPattern {
    pub fn empty() -> Self {
        ErrorPattern::default()
    }

    /// Builds a pattern from any collection of distinct nonzero ranks.
    pub fn from_ranks(mut ranks: Vec<usize>) -> Self {
        ranks.sort_unstable();
        assert!(ranks.first().is_none_or(|&r| r >= 1), "ranks are 1-based");
        assert!(
            ranks.windows(2).all(|w| w[0] < w[1]),
            "ranks must be distinct"
        );
        ErrorPattern { ranks }
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn logistic_weight(&self) -> usize {
        self.ranks.iter().sum()
    }

    pub fn hamming_weight(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }
}

/// Order in which noise effects are proposed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PatternOrder {
    /// ORBGRAND: nondecreasing logistic weight.
    #[default]
    Logistic,
    /// Hard-detection GRAND: nondecreasing Hamming weight, lexicographic in
    /// rank within a weight.
    Hamming,
}

impl FromStr for PatternOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim() {
            "logistic" => Ok(PatternOrder::Logistic),
            "hamming" => Ok(PatternOrder::Hamming),
            other => Err(Error::Config(format!(
                "pattern_order must be `logistic` or `hamming`, got {other:?}"
            ))),
        }
    }
}

impl fmt::Display for PatternOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PatternOrder::Logistic => "logistic",
            PatternOrder::Hamming => "hamming",
        })
    }
}

/// Resumable enumerator of error patterns over ranks `1..=n`.
#[derive(Debug, Clone)]
pub struct PatternGenerator {
    n: usize,
    order: PatternOrder,
    budget: Option<u64>,
    emitted: u64,
    started: bool,
    done: bool,
    /// Logistic weight (logistic order) or Hamming weight (Hamming order).
    weight: usize,
    parts: Vec<usize>,
}

impl PatternGenerator {
    /// `budget` caps the number of emitted patterns; `None` runs through all
    /// `2^n` of them.
    pub fn new(n: usize, order: PatternOrder, budget: Option<u64>) -> Self {
        PatternGenerator {
            n,
            order,
            budget,
            emitted: 0,
            started: false,
            done: false,
            weight: 0,
            parts: Vec::new(),
        }
    }

    pub fn logistic(n: usize) -> Self {
        Self::new(n, PatternOrder::Logistic, None)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn emitted(&self) -> u64 {
        self.emitted
    }

    /// Moves to the next pattern and returns its ranks, or `None` once the
    /// budget or the pattern space is exhausted.
    pub fn advance(&mut self) -> Option<&[usize]> {
        if self.done || self.budget.is_some_and(|b| self.emitted >= b) {
            self.done = true;
            return None;
        }
        let ok = if !self.started {
            self.started = true;
            self.weight = 0;
            self.parts.clear();
            true
        } else {
            match self.order {
                PatternOrder::Logistic => self.step_logistic(),
                PatternOrder::Hamming => self.step_hamming(),
            }
        };
        if !ok {
            self.done = true;
            return None;
        }
        self.emitted += 1;
        Some(&self.parts)
    }

    pub fn next_pattern(&mut self) -> Option<ErrorPattern> {
        self.advance().map(|ranks| ErrorPattern {
            ranks: ranks.to_vec(),
        })
    }

    fn max_logistic_weight(&self) -> usize {
        self.n * (self.n + 1) / 2
    }

    fn step_logistic(&mut self) -> bool {
        if !self.parts.is_empty() && self.predecessor() {
            return true;
        }
        let mut parts = self.parts.len();
        loop {
            parts += 1;
            if parts * (parts + 1) / 2 > self.weight {
                self.weight += 1;
                if self.weight > self.max_logistic_weight() {
                    return false;
                }
                parts = 0;
                continue;
            }
            self.parts.clear();
            self.parts.resize(parts, 0);
            if fill_largest(&mut self.parts, 0, self.weight, self.n) {
                return true;
            }
        }
    }

    /// Replaces the current partition by its lexicographic predecessor with
    /// the same weight and number of parts.
    fn predecessor(&mut self) -> bool {
        let m = self.parts.len();
        let mut suffix: usize = self.parts[m - 1];
        for i in (0..m.saturating_sub(1)).rev() {
            suffix += self.parts[i];
            let floor = if i == 0 { 0 } else { self.parts[i - 1] };
            let candidate = self.parts[i] - 1;
            if candidate <= floor {
                continue;
            }
            let rest = suffix - candidate;
            let count = m - 1 - i;
            if rest > max_sum(count, self.n) {
                continue;
            }
            self.parts[i] = candidate;
            if fill_largest(&mut self.parts, i + 1, rest, self.n) {
                return true;
            }
            unreachable!("feasible suffix could not be filled");
        }
        false
    }

    fn step_hamming(&mut self) -> bool {
        let w = self.parts.len();
        // Next combination of w ranks in lexicographic order.
        for i in (0..w).rev() {
            if self.parts[i] < self.n - (w - 1 - i) {
                self.parts[i] += 1;
                for j in i + 1..w {
                    self.parts[j] = self.parts[j - 1] + 1;
                }
                return true;
            }
        }
        if w >= self.n {
            return false;
        }
        self.weight = w + 1;
        self.parts.clear();
        self.parts.extend(1..=w + 1);
        true
    }
}

impl Iterator for PatternGenerator {
    type Item = ErrorPattern;

    fn next(&mut self) -> Option<ErrorPattern> {
        self.next_pattern()
    }
}

/// Largest sum of `count` distinct values in `1..=n`.
fn max_sum(count: usize, n: usize) -> usize {
    if count == 0 {
        0
    } else {
        count * n - count * (count - 1) / 2
    }
}

/// Fills `parts[start..]` with the lexicographically largest strictly
/// increasing sequence of values in `(parts[start - 1], n]` summing to `total`.
fn fill_largest(parts: &mut [usize], start: usize, mut total: usize, n: usize) -> bool {
    let mut floor = if start == 0 { 0 } else { parts[start - 1] };
    let len = parts.len();
    let count = len - start;
    if count == 0 {
        return total == 0;
    }
    // Smallest and largest achievable sums for the suffix.
    if count * floor + count * (count + 1) / 2 > total || total > max_sum(count, n) {
        return false;
    }
    for (offset, slot) in parts[start..].iter_mut().enumerate() {
        let remaining = count - offset;
        let value = if remaining == 1 {
            total
        } else {
            let by_sum = (total - remaining * (remaining - 1) / 2) / remaining;
            by_sum.min(n + 1 - remaining)
        };
        debug_assert!(value > floor && value <= n);
        debug_assert!(total - value <= max_sum(remaining - 1, n));
        *slot = value;
        total -= value;
        floor = value;
    }
    true
}

/// Flips the positions the pattern's ranks map to.
pub fn apply_pattern(hard: BitBlock, pattern: &ErrorPattern, order: &ReliabilityOrder) -> BitBlock {
    let mut out = hard;
    for &rank in pattern.ranks() {
        out.flip(order.position(rank));
    }
    out
}

pub fn apply_pattern_word(
    hard: &BitWord,
    pattern: &ErrorPattern,
    order: &ReliabilityOrder,
) -> BitWord {
    let mut out = *hard;
    for &rank in pattern.ranks() {
        out.flip(order.position(rank));
    }
    out
}

/// Guess-loop settings shared by the decoding pipelines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GuessConfig {
    pub order: PatternOrder,
    /// Membership queries allowed before abandoning, including the first
    /// (empty pattern) query.
    pub max_queries: u64,
}

impl Default for GuessConfig {
    fn default() -> Self {
        GuessConfig {
            order: PatternOrder::Logistic,
            max_queries: DEFAULT_MAX_QUERIES,
        }
    }
}

/// The noise effect a successful guess removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Correction {
    pub pattern: ErrorPattern,
    /// Flipped bit positions, in pattern rank order.
    pub positions: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuessOutcome {
    pub queries: u64,
    /// `None` when the budget ran out.
    pub correction: Option<Correction>,
}

impl GuessOutcome {
    pub fn abandoned(&self) -> bool {
        self.correction.is_none()
    }
}

/// GRAND: test noise effects in likelihood order until `member` accepts.
///
/// `member` receives the bit positions to flip in the hard decision and
/// returns whether the corrected word is in the codebook. The empty pattern
/// is tried before the reliabilities are sorted, since most receptions at
/// useful SNR need no correction at all.
pub fn guess<F>(reliabilities: &[f64], config: &GuessConfig, mut member: F) -> GuessOutcome
where
    F: FnMut(&[usize]) -> bool,
{
    if config.max_queries == 0 {
        return GuessOutcome {
            queries: 0,
            correction: None,
        };
    }
    if member(&[]) {
        return GuessOutcome {
            queries: 1,
            correction: Some(Correction {
                pattern: ErrorPattern::empty(),
                positions: Vec::new(),
            }),
        };
    }
    let order = ReliabilityOrder::from_reliabilities(reliabilities);
    let mut generator = PatternGenerator::new(order.len(), config.order, Some(config.max_queries));
    generator.advance();
    let mut positions = Vec::with_capacity(16);
    let mut queries = 1;
    while let Some(ranks) = generator.advance() {
        queries += 1;
        positions.clear();
        positions.extend(ranks.iter().map(|&r| order.position(r)));
        if member(&positions) {
            return GuessOutcome {
                queries,
                correction: Some(Correction {
                    pattern: ErrorPattern {
                        ranks: ranks.to_vec(),
                    },
                    positions,
                }),
            };
        }
    }
    GuessOutcome {
        queries,
        correction: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    /// Every subset of 1..=n, sorted by logistic weight.
    fn all_subsets_by_weight(n: usize) -> Vec<(usize, Vec<usize>)> {
        let mut subsets: Vec<(usize, Vec<usize>)> = (0u32..(1 << n))
            .map(|mask| {
                let ranks: Vec<usize> = (1..=n).filter(|r| mask >> (r - 1) & 1 == 1).collect();
                (ranks.iter().sum(), ranks)
            })
            .collect();
        subsets.sort();
        subsets
    }

    /// Distinct-part partitions of `total` with parts `<= n`, by recursion on
    /// the largest allowed part.
    fn count_distinct_partitions(total: usize, largest: usize) -> u64 {
        if total == 0 {
            return 1;
        }
        if largest == 0 {
            return 0;
        }
        let mut count = count_distinct_partitions(total, largest - 1);
        if largest <= total {
            count += count_distinct_partitions(total - largest, largest - 1);
        }
        count
    }

    #[test]
    fn ranking_example() {
        let order = ReliabilityOrder::from_reliabilities(&[0.9, 0.1, 0.5]);
        assert_eq!(order.rank_of(1), 1);
        assert_eq!(order.rank_of(2), 2);
        assert_eq!(order.rank_of(0), 3);
        assert_eq!(order.position(1), 1);
    }

    #[test]
    fn equal_reliabilities_give_identity() {
        let order = ReliabilityOrder::from_reliabilities(&[0.4; 7]);
        assert_eq!(
            order,
            ReliabilityOrder {
                positions: (0..7).collect(),
                reliabilities: vec![0.4; 7],
            }
        );
    }

    #[test]
    fn first_pattern_is_empty() {
        let mut generator = PatternGenerator::logistic(128);
        assert_eq!(generator.next_pattern(), Some(ErrorPattern::empty()));
        assert_eq!(generator.next_pattern().unwrap().ranks(), &[1]);
        assert_eq!(generator.next_pattern().unwrap().ranks(), &[2]);
    }

    #[test]
    fn weight_three_has_two_patterns() {
        let weight3: Vec<_> = PatternGenerator::logistic(16)
            .take_while(|p| p.logistic_weight() <= 3)
            .filter(|p| p.logistic_weight() == 3)
            .collect();
        assert_eq!(
            weight3,
            vec![
                ErrorPattern::from_ranks(vec![3]),
                ErrorPattern::from_ranks(vec![1, 2])
            ]
        );
    }

    #[test]
    fn fixed_part_count_starts_balanced() {
        let weight10: Vec<Vec<usize>> = PatternGenerator::logistic(16)
            .skip_while(|p| p.logistic_weight() < 10)
            .take_while(|p| p.logistic_weight() == 10)
            .map(|p| p.ranks().to_vec())
            .collect();
        assert_eq!(
            weight10,
            vec![
                vec![10],
                vec![4, 6],
                vec![3, 7],
                vec![2, 8],
                vec![1, 9],
                vec![2, 3, 5],
                vec![1, 4, 5],
                vec![1, 3, 6],
                vec![1, 2, 7],
                vec![1, 2, 3, 4],
            ]
        );
    }

    #[test]
    fn exhaustive_n8_matches_all_subsets() {
        let emitted: Vec<ErrorPattern> = PatternGenerator::logistic(8).collect();
        assert_eq!(emitted.len(), 256);
        assert!(emitted
            .windows(2)
            .all(|w| w[0].logistic_weight() <= w[1].logistic_weight()));
        assert_eq!(emitted.last().unwrap().logistic_weight(), 36);
        let mut got: Vec<(usize, Vec<usize>)> = emitted
            .iter()
            .map(|p| (p.logistic_weight(), p.ranks().to_vec()))
            .collect();
        got.sort();
        assert_eq!(got, all_subsets_by_weight(8));
    }

    #[test]
    fn power_set_for_small_n() {
        for n in 1..=12 {
            let emitted: Vec<ErrorPattern> = PatternGenerator::logistic(n).collect();
            assert_eq!(emitted.len(), 1 << n, "n = {n}");
            let unique: HashSet<_> = emitted.iter().cloned().collect();
            assert_eq!(unique.len(), 1 << n);
            assert!(emitted
                .windows(2)
                .all(|w| w[0].logistic_weight() <= w[1].logistic_weight()));
            assert!(emitted
                .iter()
                .all(|p| p.ranks().iter().all(|&r| (1..=n).contains(&r))));
        }
    }

    #[test]
    fn per_weight_counts_match_partition_counts() {
        for n in 1..=12 {
            let mut counts = vec![0u64; 41];
            for pattern in PatternGenerator::logistic(n) {
                if pattern.logistic_weight() <= 40 {
                    counts[pattern.logistic_weight()] += 1;
                }
            }
            for (weight, &count) in counts.iter().enumerate() {
                assert_eq!(
                    count,
                    count_distinct_partitions(weight, n),
                    "n = {n}, L = {weight}"
                );
            }
        }
    }

    #[test]
    fn large_n_prefix_counts() {
        // n = 128: no part bound is active below weight 129.
        let mut counts = vec![0u64; 41];
        for pattern in PatternGenerator::logistic(128).take_while(|p| p.logistic_weight() <= 40) {
            counts[pattern.logistic_weight()] += 1;
        }
        for (weight, &count) in counts.iter().enumerate() {
            assert_eq!(count, count_distinct_partitions(weight, 128));
        }
    }

    #[test]
    fn budget_limits_emissions() {
        let mut generator = PatternGenerator::new(128, PatternOrder::Logistic, Some(5));
        assert_eq!(generator.by_ref().count(), 5);
        assert_eq!(generator.next_pattern(), None);
        assert_eq!(
            PatternGenerator::new(8, PatternOrder::Logistic, Some(0)).count(),
            0
        );
    }

    #[test]
    fn generators_are_deterministic() {
        let a: Vec<_> = PatternGenerator::logistic(64).take(5000).collect();
        let b: Vec<_> = PatternGenerator::logistic(64).take(5000).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn hamming_order_covers_power_set() {
        let emitted: Vec<ErrorPattern> =
            PatternGenerator::new(8, PatternOrder::Hamming, None).collect();
        assert_eq!(emitted.len(), 256);
        assert!(emitted
            .windows(2)
            .all(|w| w[0].hamming_weight() <= w[1].hamming_weight()));
        let unique: HashSet<_> = emitted.into_iter().collect();
        assert_eq!(unique.len(), 256);
        let first: Vec<_> = PatternGenerator::new(4, PatternOrder::Hamming, None)
            .take(6)
            .map(|p| p.ranks().to_vec())
            .collect();
        assert_eq!(
            first,
            vec![vec![], vec![1], vec![2], vec![3], vec![4], vec![1, 2]]
        );
    }

    #[test]
    fn apply_pattern_maps_ranks_to_positions() {
        let mut reliabilities = vec![1.0; 128];
        reliabilities[5] = 0.01;
        let order = ReliabilityOrder::from_reliabilities(&reliabilities);
        let hard = BitBlock::from_u128(0xdead_beef);
        assert_eq!(apply_pattern(hard, &ErrorPattern::empty(), &order), hard);
        let flipped = apply_pattern(hard, &ErrorPattern::from_ranks(vec![1]), &order);
        assert_eq!(flipped ^ hard, BitBlock::from_u128(BitBlock::mask(5)));
        let pattern = ErrorPattern::from_ranks(vec![1, 4, 9]);
        assert_eq!(
            apply_pattern(apply_pattern(hard, &pattern, &order), &pattern, &order),
            hard
        );
    }

    #[test]
    fn guess_finds_single_least_reliable_flip_on_second_query() {
        let reliabilities = [0.8, 0.05, 0.9, 0.7];
        let truth = BitWord::from_bits([true, false, true, true]);
        let mut received = truth;
        received.flip(1);
        let outcome = guess(&reliabilities, &GuessConfig::default(), |flips| {
            let mut candidate = received;
            for &p in flips {
                candidate.flip(p);
            }
            candidate == truth
        });
        assert_eq!(outcome.queries, 2);
        assert_eq!(outcome.correction.unwrap().positions, vec![1]);
    }

    #[test]
    fn guess_abandons_at_budget() {
        let config = GuessConfig {
            order: PatternOrder::Logistic,
            max_queries: 10,
        };
        let mut calls = 0;
        let outcome = guess(&[0.5; 16], &config, |_| {
            calls += 1;
            false
        });
        assert!(outcome.abandoned());
        assert_eq!(outcome.queries, 10);
        assert_eq!(calls, 10);
        let none = guess(
            &[0.5; 16],
            &GuessConfig {
                max_queries: 0,
                ..config
            },
            |_| true,
        );
        assert_eq!(none.queries, 0);
        assert!(none.abandoned());
    }
}
