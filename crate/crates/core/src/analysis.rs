//! Structural analysis on top of enumeration: minimum-weight designs,
//! block-intersection spectra, 2-ranks, and the self-dual neighbor test.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::json;

use crate::codes::LinearCode;
use crate::enumeration::LowWeightReport;
use crate::error::{Error, Result};
use crate::geometry::Design;
use crate::gf2::{BitMatrix, BitVector, RowBasis};

/// Upper limit on block pairs examined by [`intersection_spectrum`].
pub const MAX_PAIRS: u64 = 1_000_000_000;

pub const NO_NEIGHBOR: &str = "no self-dual neighbor with higher minimum distance";

/// The design held by the minimum-weight codewords of a code.
#[derive(Debug, Clone)]
pub struct MinWeightDesign {
    pub weight: usize,
    pub design: Design,
    /// Rank of the codeword matrix.
    pub rank: usize,
    /// The words span the whole code.
    pub spans_code: bool,
}

/// Blocks are the supports of all minimum-weight codewords collected in
/// `report`, which must be a certified enumeration reaching that weight.
pub fn min_weight_design(code: &LinearCode, report: &LowWeightReport) -> Result<MinWeightDesign> {
    if report.n != code.n() {
        return Err(Error::DimensionMismatch(format!(
            "report for length {} used with a code of length {}",
            report.n,
            code.n()
        )));
    }
    if !report.certified {
        return Err(Error::Precondition("low-weight enumeration is not certified".into()));
    }
    let weight = report
        .minimum_weight()
        .ok_or_else(|| Error::Precondition(format!("no nonzero codewords up to weight {}", report.target)))?;
    let words = report.words(weight);
    if words.is_empty() {
        return Err(Error::Precondition(format!(
            "weight-{weight} codewords were not collected"
        )));
    }
    let mut basis = RowBasis::new(code.n());
    for w in words {
        if !code.contains(w) {
            return Err(Error::Inconsistent("collected word is not a codeword".into()));
        }
        basis.insert(w.clone());
    }
    let rank = basis.rank();
    Ok(MinWeightDesign {
        weight,
        design: Design::new(code.n(), words.to_vec())?,
        rank,
        spans_code: rank == code.k(),
    })
}

/// Multiset of pairwise block-intersection sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionSpectrum {
    pub counts: BTreeMap<usize, u64>,
}

impl IntersectionSpectrum {
    /// Sizes that occur at least once.
    pub fn support(&self) -> Vec<usize> {
        self.counts.keys().copied().collect()
    }

    pub fn pairs(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let counts: serde_json::Map<String, serde_json::Value> =
            self.counts.iter().map(|(s, c)| (s.to_string(), json!(c))).collect();
        json!({ "support": self.support(), "pairs": self.pairs(), "counts": counts })
    }
}

pub fn intersection_spectrum(design: &Design) -> Result<IntersectionSpectrum> {
    let b = design.block_count() as u64;
    let pairs = b * b.saturating_sub(1) / 2;
    if pairs > MAX_PAIRS {
        return Err(Error::TooLarge(format!(
            "{pairs} block pairs exceeds the limit of {MAX_PAIRS}"
        )));
    }
    let blocks = design.blocks();
    let k = design.block_size();
    let hist = (0..blocks.len())
        .into_par_iter()
        .fold(
            || vec![0u64; k + 1],
            |mut h, i| {
                for other in &blocks[i + 1..] {
                    h[blocks[i].and_weight(other)] += 1;
                }
                h
            },
        )
        .reduce(
            || vec![0u64; k + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let counts = hist.into_iter().enumerate().filter(|&(_, c)| c > 0).collect();
    Ok(IntersectionSpectrum { counts })
}

/// GF(2) rank of the block-by-point incidence matrix.
pub fn two_rank(design: &Design) -> usize {
    let mut basis = RowBasis::new(design.point_count());
    for b in design.blocks() {
        basis.insert(b.clone());
        if basis.rank() == design.point_count() {
            break;
        }
    }
    basis.rank()
}

/// Blocks through `point`, with that point removed.
pub fn derived_design(design: &Design, point: usize) -> Result<Design> {
    if point >= design.point_count() {
        return Err(Error::InvalidParameter(format!(
            "point {point} outside a design on {} points",
            design.point_count()
        )));
    }
    let blocks: Vec<BitVector> = design
        .blocks()
        .iter()
        .filter(|b| b.get(point))
        .map(|b| b.remove(point))
        .collect();
    if blocks.is_empty() {
        return Err(Error::InvalidParameter(format!("no block contains point {point}")));
    }
    Design::new(design.point_count() - 1, blocks)
}

/// Outcome of solving `M x^T = 1^T` over the weight-`d` codewords.
#[derive(Debug, Clone)]
pub struct NeighborVerdict {
    pub d: usize,
    pub rank_m: usize,
    pub rank_m_aug: usize,
    pub solvable: bool,
    /// Some solution, present exactly when the system is solvable.
    pub witness: Option<BitVector>,
    /// An even-weight solution, when one exists.
    pub even_witness: Option<BitVector>,
    /// `<C0, x>` and `<C0, x + y>`.
    pub neighbors: Option<(LinearCode, LinearCode)>,
}

impl NeighborVerdict {
    pub fn conclusion(&self) -> String {
        match (self.solvable, &self.neighbors) {
            (false, _) => NO_NEIGHBOR.to_string(),
            (true, Some(_)) => format!("two self-dual neighbors avoid every weight-{} codeword", self.d),
            (true, None) => "solvable, but every solution has odd weight".to_string(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = json!({
            "rank_M": self.rank_m,
            "rank_M_aug": self.rank_m_aug,
            "solvable": self.solvable,
            "conclusion": self.conclusion(),
        });
        if let Some(x) = &self.even_witness {
            v["witness"] = json!(x.to_string());
        }
        v
    }
}

/// Decides whether `M x^T = 1^T` is solvable, where the rows of `M` are all
/// weight-`d` codewords of the self-dual code `code`. An even-weight
/// solution `x` yields the neighbors `<C0, x>` and `<C0, x + y>` with
/// `C0 = <x>^⊥ ∩ C` and `y` the first generator row outside `C0`.
pub fn neighbor_test(code: &LinearCode, d: usize, report: &LowWeightReport) -> Result<NeighborVerdict> {
    let n = code.n();
    if report.n != n {
        return Err(Error::DimensionMismatch(format!(
            "report for length {} used with a code of length {n}",
            report.n
        )));
    }
    if !code.is_self_dual() {
        return Err(Error::Precondition("code is not self-dual".into()));
    }
    if !report.certified || report.target < d {
        return Err(Error::Precondition(format!(
            "weight-{d} codewords are not certified complete"
        )));
    }
    let words = report.words(d);
    if words.is_empty() {
        return Err(Error::Precondition(format!("no weight-{d} codewords")));
    }

    let mut plain = RowBasis::new(n);
    let mut aug = RowBasis::new(n + 1);
    for w in words {
        plain.insert(w.clone());
        let mut row = w.clone();
        row.push(true);
        aug.insert(row);
    }
    let (rank_m, rank_m_aug) = (plain.rank(), aug.rank());
    let mut verdict = NeighborVerdict {
        d,
        rank_m,
        rank_m_aug,
        solvable: rank_m == rank_m_aug,
        witness: None,
        even_witness: None,
        neighbors: None,
    };
    if !verdict.solvable {
        return Ok(verdict);
    }

    // The augmented basis spans the same system with far fewer rows.
    let (lhs, rhs): (Vec<BitVector>, Vec<bool>) = aug.vectors().map(|r| (r.remove(n), r.get(n))).unzip();
    let m = BitMatrix::from_rows_with_cols(n, lhs)?;
    let x = m
        .solve(&BitVector::from_bools(&rhs))?
        .ok_or_else(|| Error::Inconsistent("equal ranks but no solution".into()))?;
    verdict.witness = Some(x.clone());
    let even = if x.weight() % 2 == 0 {
        Some(x)
    } else {
        m.null_space()
            .row_vectors()
            .iter()
            .find(|z| z.weight() % 2 == 1)
            .map(|z| x.xor(z))
    };
    if let Some(x) = &even {
        verdict.neighbors = Some(build_neighbors(code, x, words)?);
    }
    verdict.even_witness = even;
    Ok(verdict)
}

fn build_neighbors(code: &LinearCode, x: &BitVector, words: &[BitVector]) -> Result<(LinearCode, LinearCode)> {
    let n = code.n();
    let rows = code.generator().row_vectors();
    let Some(pos) = rows.iter().position(|r| r.dot(x)) else {
        return Err(Error::Inconsistent("witness is orthogonal to the code".into()));
    };
    let y = rows[pos].clone();
    // Fix the odd rows against y: C0 is their span together with the even rows.
    let c0: Vec<BitVector> = rows
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != pos)
        .map(|(_, r)| if r.dot(x) { r.xor(&y) } else { r.clone() })
        .collect();
    let make = |extra: BitVector| -> Result<LinearCode> {
        let mut g = c0.clone();
        g.push(extra);
        LinearCode::from_span(&BitMatrix::from_rows_with_cols(n, g)?)
    };
    let first = make(x.clone())?;
    let second = make(x.xor(&y))?;
    let c_rank = code.k();
    for nb in [&first, &second] {
        let mut sum = code.basis();
        for r in nb.generator().row_vectors() {
            sum.insert(r.clone());
        }
        let shared = nb.k() + c_rank - sum.rank();
        if !nb.is_self_dual() || shared != n / 2 - 1 || words.iter().any(|w| nb.contains(w)) {
            return Err(Error::Inconsistent("constructed neighbor failed verification".into()));
        }
    }
    Ok((first, second))
}
