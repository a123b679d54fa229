//! Exact weight distributions and certified low-weight codeword enumeration.
//!
//! Small codes are enumerated completely in Gray-code order. Larger codes go
//! through a multi-information-set enumeration: every message of
//! information weight `r` is encoded against each systematic form in turn,
//! and a lower bound on the weight of every codeword not yet produced is
//! maintained. Once that bound passes the target weight, the collected list
//! is complete.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::gf2::BitVector;

/// Default cap on `k` for complete enumeration.
pub const DEFAULT_FULL_CAP: usize = 28;
/// Default budget: 2^36 encodings.
pub const DEFAULT_BUDGET_LOG2: u32 = 36;

const MAX_WORDS: usize = 16;

macro_rules! dispatch_words {
    ($words:expr, $f:ident, $($arg:expr),*) => {
        match $words {
            1 => Ok($f::<1>($($arg),*)),
            2 => Ok($f::<2>($($arg),*)),
            3 => Ok($f::<3>($($arg),*)),
            4 => Ok($f::<4>($($arg),*)),
            5 => Ok($f::<5>($($arg),*)),
            6 => Ok($f::<6>($($arg),*)),
            7 => Ok($f::<7>($($arg),*)),
            8 => Ok($f::<8>($($arg),*)),
            9..=MAX_WORDS => Ok($f::<MAX_WORDS>($($arg),*)),
            w => Err(Error::TooLarge(format!("{w} words per vector"))),
        }
    };
}

/// Exact weight distribution: weight → count, zero counts omitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightDistribution {
    n: usize,
    counts: BTreeMap<usize, BigUint>,
}

impl WeightDistribution {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            counts: BTreeMap::new(),
        }
    }

    pub fn from_counts(n: usize, counts: impl IntoIterator<Item = (usize, BigUint)>) -> Result<Self> {
        let mut d = Self::new(n);
        for (w, c) in counts {
            if w > n {
                return Err(Error::InvalidParameter(format!("weight {w} exceeds length {n}")));
            }
            d.add(w, c);
        }
        Ok(d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add(&mut self, weight: usize, count: BigUint) {
        assert!(weight <= self.n, "weight {weight} exceeds length {}", self.n);
        if count.is_zero() {
            return;
        }
        *self.counts.entry(weight).or_default() += count;
    }

    pub fn get(&self, weight: usize) -> BigUint {
        self.counts.get(&weight).cloned().unwrap_or_default()
    }

    /// Nonzero entries in increasing weight order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &BigUint)> {
        self.counts.iter().map(|(&w, c)| (w, c))
    }

    pub fn total(&self) -> BigUint {
        self.counts.values().sum()
    }

    /// `A_w = A_{n-w}` for every `w`.
    pub fn is_symmetric(&self) -> bool {
        self.counts.iter().all(|(&w, c)| self.get(self.n - w) == *c)
    }

    /// Smallest nonzero weight with a nonzero count.
    pub fn minimum_weight(&self) -> Option<usize> {
        self.counts.keys().copied().find(|&w| w > 0)
    }

    /// JSON report: `{"n":…, "k":…, "certified_up_to":…, "counts":{"16":"94488", …}}`.
    /// Counts are decimal strings; `extra_zero` weights are listed even when zero.
    pub fn to_json(&self, k: usize, certified_up_to: usize, extra_zero: &[usize]) -> serde_json::Value {
        let mut weights: Vec<usize> = self.counts.keys().copied().collect();
        weights.extend(extra_zero.iter().copied().filter(|&w| w <= self.n));
        weights.sort_unstable();
        weights.dedup();
        let counts: serde_json::Map<String, serde_json::Value> = weights
            .into_iter()
            .map(|w| (w.to_string(), serde_json::Value::String(self.get(w).to_string())))
            .collect();
        serde_json::json!({
            "n": self.n,
            "k": k,
            "certified_up_to": certified_up_to,
            "counts": counts,
        })
    }
}

/// Knobs shared by the enumeration entry points.
#[derive(Debug, Clone)]
pub struct EnumerationOptions {
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    /// Maximum number of encodings before refusing.
    pub budget: BigUint,
    /// Proceed even when the projected work exceeds the budget.
    pub force: bool,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        Self {
            threads: None,
            budget: BigUint::one() << DEFAULT_BUDGET_LOG2,
            force: false,
        }
    }
}

impl EnumerationOptions {
    pub fn with_threads(threads: usize) -> Self {
        Self {
            threads: Some(threads),
            ..Self::default()
        }
    }

    fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        match self.threads {
            None => Ok(f()),
            Some(0) => Err(Error::InvalidParameter("thread count must be positive".into())),
            Some(t) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build()
                    .map_err(|e| Error::InvalidParameter(e.to_string()))?;
                Ok(pool.install(f))
            }
        }
    }
}

/// Complete distribution by Gray-code traversal of all `2^k` codewords.
pub fn full_distribution(code: &LinearCode) -> Result<WeightDistribution> {
    full_distribution_with(code, DEFAULT_FULL_CAP, &EnumerationOptions::default())
}

pub fn full_distribution_with(code: &LinearCode, cap: usize, opts: &EnumerationOptions) -> Result<WeightDistribution> {
    let k = code.k();
    if k > cap || k > 62 {
        return Err(Error::TooLarge(format!(
            "dimension {k} exceeds the complete-enumeration cap of {cap}; use low_weight_enumerate"
        )));
    }
    let words = code.n().div_ceil(64);
    let hist = opts.install(|| dispatch_words!(words, gray_histogram, code))??;
    WeightDistribution::from_counts(
        code.n(),
        hist.into_iter().enumerate().map(|(w, c)| (w, BigUint::from(c))),
    )
}

fn pack<const N: usize>(v: &BitVector) -> [u64; N] {
    let mut out = [0u64; N];
    out[..v.words().len()].copy_from_slice(v.words());
    out
}

#[inline(always)]
fn xor<const N: usize>(a: &[u64; N], b: &[u64; N]) -> [u64; N] {
    let mut out = *a;
    for (o, x) in out.iter_mut().zip(b) {
        *o ^= x;
    }
    out
}

#[inline(always)]
fn popcount<const N: usize>(a: &[u64; N]) -> u32 {
    a.iter().map(|w| w.count_ones()).sum()
}

fn gray_histogram<const N: usize>(code: &LinearCode) -> Vec<u64> {
    let k = code.k();
    let n = code.n();
    let rows: Vec<[u64; N]> = code.generator().row_vectors().iter().map(pack::<N>).collect();
    let chunk_bits = k.min(16);
    let chunks = 1u64 << (k - chunk_bits);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut hist = vec![0u64; n + 1];
            let start = c << chunk_bits;
            let gray = start ^ (start >> 1);
            let mut acc = [0u64; N];
            for (i, row) in rows.iter().enumerate() {
                if gray >> i & 1 == 1 {
                    acc = xor(&acc, row);
                }
            }
            hist[popcount(&acc) as usize] += 1;
            for i in start + 1..start + (1u64 << chunk_bits) {
                acc = xor(&acc, &rows[i.trailing_zeros() as usize]);
                hist[popcount(&acc) as usize] += 1;
            }
            hist
        })
        .reduce(
            || vec![0u64; n + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        )
}

/// Result of a certified bounded-weight enumeration.
#[derive(Debug, Clone)]
pub struct LowWeightReport {
    pub n: usize,
    pub k: usize,
    /// Target weight `w`: every codeword of weight ≤ `w` was collected.
    pub target: usize,
    /// Counts for weights ≤ `target`.
    pub distribution: WeightDistribution,
    /// Collected codewords by weight, each list sorted.
    pub codewords: BTreeMap<usize, Vec<BitVector>>,
    /// The enumeration stopped because the lower bound on unseen codewords
    /// exceeded `target`, or because every message was enumerated.
    pub certified: bool,
    /// Lower bound on the weight of any codeword not produced.
    pub lower_bound: usize,
    /// Number of encodings performed.
    pub work: BigUint,
}

impl LowWeightReport {
    pub fn count(&self, weight: usize) -> BigUint {
        self.distribution.get(weight)
    }

    pub fn words(&self, weight: usize) -> &[BitVector] {
        self.codewords.get(&weight).map_or(&[], Vec::as_slice)
    }

    /// Smallest nonzero weight found; certified as the minimum distance
    /// when the report is certified.
    pub fn minimum_weight(&self) -> Option<usize> {
        self.distribution.minimum_weight()
    }

    pub fn to_json(&self) -> serde_json::Value {
        self.distribution.to_json(self.k, self.target, &[self.target])
    }
}

/// Round schedule over the information sets of a code.
#[derive(Debug, Clone)]
struct Schedule {
    k: usize,
    /// `k - fresh` per information set.
    deficits: Vec<usize>,
}

impl Schedule {
    fn new(code: &LinearCode) -> Self {
        Self {
            k: code.k(),
            deficits: code.information_sets().iter().map(|s| code.k() - s.fresh).collect(),
        }
    }

    fn sets(&self) -> usize {
        self.deficits.len()
    }

    /// Lower bound on the weight of a codeword not yet produced, once round
    /// `r` has run on sets `0..=j` and round `r - 1` on the rest. A codeword
    /// missed by set `i` after round `r` has information weight > `r` there,
    /// hence weight ≥ `r + 1 - deficit` on the fresh part of that set.
    fn bound_after(&self, r: usize, j: usize) -> usize {
        self.deficits
            .iter()
            .enumerate()
            .map(|(i, &def)| {
                if i <= j {
                    (r + 1).saturating_sub(def)
                } else {
                    r.saturating_sub(def)
                }
            })
            .sum()
    }

    /// Rounds `(r, j)` that must run to certify every codeword of weight ≤ `target`.
    fn rounds_for(&self, target: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for r in 0..=self.k {
            for j in 0..self.sets() {
                out.push((r, j));
                if self.bound_after(r, j) > target || r == self.k {
                    return out;
                }
            }
        }
        out
    }
}

fn combinations(k: usize, r: usize) -> BigUint {
    binomial(BigUint::from(k), BigUint::from(r))
}

/// Work needed by [`low_weight_enumerate`] for the given target weight.
pub fn projected_work(code: &LinearCode, target: usize) -> BigUint {
    Schedule::new(code)
        .rounds_for(target)
        .iter()
        .map(|&(r, _)| combinations(code.k(), r))
        .sum()
}

/// One systematic form packed for the hot loop.
struct Packed<const N: usize> {
    /// Redundancy part of each row (non-information columns, in order).
    redundancy: Vec<[u64; N]>,
    /// Rows in original coordinates, for rebuilding hits.
    rows: Vec<BitVector>,
}

impl<const N: usize> Packed<N> {
    fn new(code: &LinearCode, set: usize) -> Self {
        let form = &code.information_sets()[set].form;
        let rest = &form.permutation[code.k()..];
        Self {
            redundancy: form
                .generator
                .row_vectors()
                .iter()
                .map(|row| pack::<N>(&row.select(rest)))
                .collect(),
            rows: form.generator.row_vectors().to_vec(),
        }
    }

    fn codeword(&self, message: &[usize]) -> BitVector {
        let mut c = BitVector::zeros(self.rows[0].len());
        for &i in message {
            c.xor_assign(&self.rows[i]);
        }
        c
    }
}

/// Enumerates every `left`-subset of `start..k` appended to `prefix`, and
/// records those whose redundancy weight is at most `max_red`.
#[inline(always)]
fn scan_suffixes_impl<const N: usize>(
    red: &[[u64; N]],
    prefix: &[usize],
    acc0: [u64; N],
    start: usize,
    left: usize,
    max_red: u32,
    hits: &mut Vec<Vec<usize>>,
) {
    let k = red.len();
    let inner = left - 1;
    let mut idx: Vec<usize> = (start..start + inner).collect();
    let mut partial: Vec<[u64; N]> = Vec::with_capacity(inner);
    for d in 0..inner {
        let base = if d == 0 { acc0 } else { partial[d - 1] };
        partial.push(xor(&base, &red[idx[d]]));
    }
    loop {
        let (base, from) = if inner == 0 {
            (acc0, start)
        } else {
            (partial[inner - 1], idx[inner - 1] + 1)
        };
        for (i, row) in red.iter().enumerate().skip(from) {
            if popcount(&xor(&base, row)) <= max_red {
                let mut m = prefix.to_vec();
                m.extend_from_slice(&idx);
                m.push(i);
                hits.push(m);
            }
        }
        // Advance the inner positions; position d may go up to k - left + d.
        let Some(d) = (0..inner).rev().find(|&d| idx[d] < k - left + d) else {
            return;
        };
        idx[d] += 1;
        for e in d..inner {
            if e > d {
                idx[e] = idx[e - 1] + 1;
            }
            let base = if e == 0 { acc0 } else { partial[e - 1] };
            partial[e] = xor(&base, &red[idx[e]]);
        }
    }
}

fn scan_suffixes_plain<const N: usize>(
    red: &[[u64; N]],
    prefix: &[usize],
    acc0: [u64; N],
    start: usize,
    left: usize,
    max_red: u32,
    hits: &mut Vec<Vec<usize>>,
) {
    scan_suffixes_impl(red, prefix, acc0, start, left, max_red, hits)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "popcnt")]
fn scan_suffixes_popcnt<const N: usize>(
    red: &[[u64; N]],
    prefix: &[usize],
    acc0: [u64; N],
    start: usize,
    left: usize,
    max_red: u32,
    hits: &mut Vec<Vec<usize>>,
) {
    scan_suffixes_impl(red, prefix, acc0, start, left, max_red, hits)
}

fn scan_suffixes<const N: usize>(
    red: &[[u64; N]],
    prefix: &[usize],
    acc0: [u64; N],
    start: usize,
    left: usize,
    max_red: u32,
    hits: &mut Vec<Vec<usize>>,
) {
    #[cfg(target_arch = "x86_64")]
    if std::arch::is_x86_feature_detected!("popcnt") {
        // SAFETY: the required CPU feature was detected at runtime.
        unsafe { scan_suffixes_popcnt(red, prefix, acc0, start, left, max_red, hits) };
        return;
    }
    scan_suffixes_plain(red, prefix, acc0, start, left, max_red, hits)
}

/// All codewords of information weight exactly `r` on `packed` whose total
/// weight is at most `limit`.
fn run_round<const N: usize>(packed: &Packed<N>, r: usize, limit: usize) -> Vec<BitVector> {
    let k = packed.redundancy.len();
    if r > limit || r > k {
        return Vec::new();
    }
    if r == 0 {
        return vec![packed.codeword(&[])];
    }
    let max_red = (limit - r) as u32;
    let red = &packed.redundancy;
    // Parallel chunks keyed by the first one or two support positions.
    let prefix_len = (r - 1).min(2);
    let mut prefixes = Vec::new();
    crate::geometry::for_each_combination(k - (r - prefix_len), prefix_len, |p| prefixes.push(p.to_vec()));
    prefixes
        .par_iter()
        .flat_map_iter(|prefix| {
            let acc = prefix.iter().fold([0u64; N], |a, &i| xor(&a, &red[i]));
            let start = prefix.last().map_or(0, |&l| l + 1);
            let mut hits = Vec::new();
            scan_suffixes(red, prefix, acc, start, r - prefix_len, max_red, &mut hits);
            hits.into_iter().map(|m| packed.codeword(&m))
        })
        .collect()
}

fn redundancy_words(code: &LinearCode) -> usize {
    (code.n() - code.k()).div_ceil(64).max(1)
}

/// Collects every codeword of weight ≤ `target`, certified exhaustive.
pub fn low_weight_enumerate(code: &LinearCode, target: usize) -> Result<LowWeightReport> {
    low_weight_enumerate_with(code, target, &EnumerationOptions::default())
}

pub fn low_weight_enumerate_with(
    code: &LinearCode,
    target: usize,
    opts: &EnumerationOptions,
) -> Result<LowWeightReport> {
    if target > code.n() {
        return Err(Error::InvalidParameter(format!(
            "target weight {target} exceeds length {}",
            code.n()
        )));
    }
    let projected = projected_work(code, target);
    if projected > opts.budget && !opts.force {
        return Err(Error::BudgetExceeded {
            projected,
            budget: opts.budget.clone(),
        });
    }
    opts.install(|| dispatch_words!(redundancy_words(code), enumerate_target, code, target))??
}

fn enumerate_target<const N: usize>(code: &LinearCode, target: usize) -> Result<LowWeightReport> {
    let schedule = Schedule::new(code);
    let packed: Vec<Packed<N>> = (0..schedule.sets()).map(|j| Packed::new(code, j)).collect();
    let mut found: HashSet<BitVector> = HashSet::new();
    let mut work = BigUint::zero();
    let mut lower_bound = 0;
    for (r, j) in schedule.rounds_for(target) {
        for c in run_round(&packed[j], r, target) {
            assert!(c.weight() <= target, "enumeration produced an overweight word");
            found.insert(c);
        }
        work += combinations(code.k(), r);
        lower_bound = schedule.bound_after(r, j);
        log::info!(
            "information set {j}, round {r}: {} words so far, lower bound {lower_bound}",
            found.len()
        );
    }
    let mut codewords: BTreeMap<usize, Vec<BitVector>> = BTreeMap::new();
    for c in found {
        codewords.entry(c.weight()).or_default().push(c);
    }
    for list in codewords.values_mut() {
        list.sort_unstable();
    }
    let distribution =
        WeightDistribution::from_counts(code.n(), codewords.iter().map(|(&w, l)| (w, BigUint::from(l.len()))))?;
    Ok(LowWeightReport {
        n: code.n(),
        k: code.k(),
        target,
        distribution,
        codewords,
        certified: true,
        lower_bound,
        work,
    })
}

/// Exact minimum distance, certified by the same lower bound.
pub fn minimum_distance(code: &LinearCode) -> Result<usize> {
    minimum_distance_with(code, &EnumerationOptions::default())
}

pub fn minimum_distance_with(code: &LinearCode, opts: &EnumerationOptions) -> Result<usize> {
    opts.install(|| dispatch_words!(redundancy_words(code), search_minimum, code, opts))??
}

fn search_minimum<const N: usize>(code: &LinearCode, opts: &EnumerationOptions) -> Result<usize> {
    let schedule = Schedule::new(code);
    let packed: Vec<Packed<N>> = (0..schedule.sets()).map(|j| Packed::new(code, j)).collect();
    let mut best = code
        .generator()
        .row_vectors()
        .iter()
        .map(BitVector::weight)
        .min()
        .expect("codes have k >= 1");
    let mut work = BigUint::zero();
    if schedule.bound_after(0, schedule.sets() - 1) >= best {
        return Ok(best);
    }
    for r in 1..=code.k() {
        for (j, p) in packed.iter().enumerate() {
            let next = &work + combinations(code.k(), r);
            if next > opts.budget && !opts.force {
                let projected = &work + projected_work(code, best - 1);
                return Err(Error::BudgetExceeded {
                    projected,
                    budget: opts.budget.clone(),
                });
            }
            work = next;
            if let Some(w) = run_round(p, r, best - 1).iter().map(BitVector::weight).min() {
                best = w;
            }
            let bound = schedule.bound_after(r, j);
            log::info!("information set {j}, round {r}: best {best}, lower bound {bound}");
            if bound >= best || r == code.k() {
                return Ok(best);
            }
        }
    }
    Ok(best)
}

/// Exact work for certifying `target`, as a machine integer when it fits.
pub fn projected_work_u64(code: &LinearCode, target: usize) -> Option<u64> {
    projected_work(code, target).to_u64()
}
