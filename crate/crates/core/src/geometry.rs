//! Finite geometries over GF(2) and the designs they induce.
//!
//! Points of PG(m,2) are the nonzero vectors of F₂^{m+1} in integer order
//! (point index = vector value − 1); points of AG(m,2) are all vectors of
//! F₂^m in integer order (point index = vector value). Bit `i` of the
//! integer is coordinate `i`.

use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

/// Largest block list `enumerate_subspaces` will build.
pub const MAX_BLOCKS: u64 = 10_000_000;
/// Largest incidence count `verify_t_design` will touch.
pub const MAX_T_INCIDENCES: u64 = 1_000_000_000;
/// Largest number of t-subset counters `verify_t_design` will allocate.
pub const MAX_T_SUBSETS: u64 = 200_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeometryKind {
    Projective,
    Affine,
}

/// Selects the design PG_s(m,q) or AG_s(m,q).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeometrySpec {
    pub kind: GeometryKind,
    pub m: u32,
    pub s: u32,
    pub q: u64,
}

impl GeometrySpec {
    pub fn projective(m: u32, s: u32, q: u64) -> Result<Self> {
        Self::new(GeometryKind::Projective, m, s, q)
    }

    pub fn affine(m: u32, s: u32, q: u64) -> Result<Self> {
        Self::new(GeometryKind::Affine, m, s, q)
    }

    pub fn new(kind: GeometryKind, m: u32, s: u32, q: u64) -> Result<Self> {
        let spec = Self { kind, m, s, q };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.s < 1 || self.s + 1 > self.m {
            return Err(Error::InvalidParameter(format!(
                "subspace dimension s = {} must satisfy 1 <= s <= m - 1 for m = {}",
                self.s, self.m
            )));
        }
        if self.q < 2 {
            return Err(Error::InvalidParameter(format!("q = {} must be at least 2", self.q)));
        }
        Ok(())
    }
}

/// Parameters of the 2-design (and the 3-design value where one exists).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesignParameters {
    pub v: BigUint,
    pub k: BigUint,
    pub lambda: BigUint,
    pub lambda3: Option<BigUint>,
}

/// Number of `i`-dimensional subspaces of an `m`-dimensional space over
/// GF(q). Out-of-range `i` yields 0.
pub fn gaussian_coefficient(m: i64, i: i64, q: u64) -> BigUint {
    assert!(q >= 2, "q must be at least 2");
    if i < 0 || m < 0 || i > m {
        return BigUint::zero();
    }
    let q = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for j in 0..i as u32 {
        num *= q.pow(m as u32 - j) - 1u32;
        den *= q.pow(i as u32 - j) - 1u32;
    }
    num / den
}

fn geometric_sum(q: u64, e: u32) -> BigUint {
    // (q^e - 1) / (q - 1)
    (BigUint::from(q).pow(e) - 1u32) / BigUint::from(q - 1)
}

pub fn design_parameters(spec: &GeometrySpec) -> Result<DesignParameters> {
    spec.validate()?;
    let (m, s, q) = (spec.m as i64, spec.s as i64, spec.q);
    let lambda = gaussian_coefficient(m - 1, s - 1, q);
    Ok(match spec.kind {
        GeometryKind::Projective => DesignParameters {
            v: geometric_sum(q, spec.m + 1),
            k: geometric_sum(q, spec.s + 1),
            lambda,
            lambda3: None,
        },
        GeometryKind::Affine => DesignParameters {
            v: BigUint::from(q).pow(spec.m),
            k: BigUint::from(q).pow(spec.s),
            lambda,
            lambda3: (q == 2 && s >= 2).then(|| gaussian_coefficient(m - 2, s - 2, 2)),
        },
    })
}

/// An incidence structure: `point_count` points and a list of blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Design {
    point_count: usize,
    blocks: Vec<BitVector>,
    /// Declared (v, k, λ), when the design comes from a known family.
    pub declared: Option<(usize, usize, u64)>,
}

impl Design {
    /// Checks that blocks are nonempty, on the right point set, and of constant size.
    pub fn new(point_count: usize, blocks: Vec<BitVector>) -> Result<Self> {
        let Some(first) = blocks.first() else {
            return Err(Error::InvalidParameter("a design needs at least one block".into()));
        };
        let k = first.weight();
        for (i, b) in blocks.iter().enumerate() {
            if b.len() != point_count {
                return Err(Error::DimensionMismatch(format!(
                    "block {i} has {} points, expected {point_count}",
                    b.len()
                )));
            }
            if b.weight() != k {
                return Err(Error::InvalidParameter(format!(
                    "block {i} has size {}, expected {k}",
                    b.weight()
                )));
            }
        }
        Ok(Self {
            point_count,
            blocks,
            declared: None,
        })
    }

    pub fn point_count(&self) -> usize {
        self.point_count
    }

    pub fn block_size(&self) -> usize {
        self.blocks[0].weight()
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[BitVector] {
        &self.blocks
    }

    /// Block-by-point incidence matrix.
    pub fn incidence_matrix(&self) -> BitMatrix {
        BitMatrix::from_rows_with_cols(self.point_count, self.blocks.clone()).expect("blocks share the point count")
    }
}

/// Canonical bases of every `dim`-dimensional subspace of F₂^`ambient`,
/// as bit masks. Basis vectors have distinct leading (highest) bits and each
/// leading bit is cleared in the other basis vectors, which makes the basis
/// unique per subspace. Output order: pivot sets lexicographically, then the
/// free entries counting upward.
fn subspace_bases(ambient: u32, dim: u32) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut pivots: Vec<u32> = (0..dim).collect();
    loop {
        // Free positions of basis vector i: non-pivot positions below pivots[i].
        let free: Vec<Vec<u32>> = pivots
            .iter()
            .map(|&p| (0..p).filter(|b| !pivots.contains(b)).collect())
            .collect();
        let total_free: u32 = free.iter().map(|f| f.len() as u32).sum();
        for assignment in 0..(1u64 << total_free) {
            let mut bits = assignment;
            let basis = pivots
                .iter()
                .zip(&free)
                .map(|(&p, f)| {
                    let mut v = 1u64 << p;
                    for &b in f {
                        if bits & 1 == 1 {
                            v |= 1 << b;
                        }
                        bits >>= 1;
                    }
                    v
                })
                .collect();
            out.push(basis);
        }
        // Next pivot combination in lexicographic order.
        let mut i = dim as usize;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pivots[i] < ambient - dim + i as u32 {
                break;
            }
        }
        pivots[i] += 1;
        for j in i + 1..dim as usize {
            pivots[j] = pivots[j - 1] + 1;
        }
    }
}

fn span(basis: &[u64]) -> Vec<u64> {
    let mut elems = vec![0u64];
    for &b in basis {
        let extra: Vec<u64> = elems.iter().map(|e| e ^ b).collect();
        elems.extend(extra);
    }
    elems
}

/// Builds the design PG_s(m,2) or AG_s(m,2).
pub fn enumerate_subspaces(spec: &GeometrySpec) -> Result<Design> {
    spec.validate()?;
    if spec.q != 2 {
        return Err(Error::Unsupported(format!(
            "subspace enumeration is implemented for q = 2 only (got q = {})",
            spec.q
        )));
    }
    let params = design_parameters(spec)?;
    let expected_blocks = match spec.kind {
        GeometryKind::Projective => gaussian_coefficient(spec.m as i64 + 1, spec.s as i64 + 1, 2),
        GeometryKind::Affine => {
            BigUint::from(2u32).pow(spec.m - spec.s) * gaussian_coefficient(spec.m as i64, spec.s as i64, 2)
        }
    };
    if expected_blocks > BigUint::from(MAX_BLOCKS) || spec.m > 24 {
        return Err(Error::TooLarge(format!(
            "{expected_blocks} blocks exceeds the limit of {MAX_BLOCKS}"
        )));
    }
    let v = params.v.to_usize().expect("guarded");
    let blocks: Vec<BitVector> = match spec.kind {
        GeometryKind::Projective => subspace_bases(spec.m + 1, spec.s + 1)
            .par_iter()
            .map(|basis| {
                BitVector::from_indices(v, span(basis).into_iter().filter(|&e| e != 0).map(|e| e as usize - 1))
            })
            .collect(),
        GeometryKind::Affine => subspace_bases(spec.m, spec.s)
            .par_iter()
            .flat_map_iter(|basis| {
                let elems = span(basis);
                let pivot_mask: u64 = basis.iter().map(|b| 1u64 << (63 - b.leading_zeros())).sum();
                // Coset representatives: vectors vanishing on every pivot position.
                (0..1u64 << spec.m)
                    .filter(move |r| r & pivot_mask == 0)
                    .map(move |r| BitVector::from_indices(v, elems.iter().map(|e| (e ^ r) as usize)))
                    .collect::<Vec<_>>()
            })
            .collect(),
    };
    debug_assert_eq!(BigUint::from(blocks.len()), expected_blocks);
    let mut design = Design::new(v, blocks)?;
    design.declared = Some((
        v,
        params.k.to_usize().expect("guarded"),
        params.lambda.to_u64().expect("guarded"),
    ));
    Ok(design)
}

/// Outcome of a t-design check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TDesignCheck {
    /// Every t-subset lies in exactly `lambda` blocks.
    Uniform { lambda: u64 },
    /// `subset` lies in `count` blocks while `{0, .., t-1}` lies in `reference`.
    Deviation {
        subset: Vec<usize>,
        count: u64,
        reference: u64,
    },
}

impl TDesignCheck {
    pub fn lambda(&self) -> Option<u64> {
        match self {
            Self::Uniform { lambda } => Some(*lambda),
            Self::Deviation { .. } => None,
        }
    }
}

fn binom_u64(n: usize, k: usize) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    binomial(BigUint::from(n), BigUint::from(k)).to_u64()
}

/// Colexicographic rank of a strictly increasing subset.
fn colex_rank(subset: &[usize], table: &[Vec<u64>]) -> u64 {
    subset.iter().enumerate().map(|(i, &p)| table[p][i + 1]).sum()
}

fn colex_unrank(mut rank: u64, t: usize, table: &[Vec<u64>]) -> Vec<usize> {
    let mut out = vec![0; t];
    for i in (0..t).rev() {
        let mut p = i;
        while p + 1 < table.len() && table[p + 1][i + 1] <= rank {
            p += 1;
        }
        rank -= table[p][i + 1];
        out[i] = p;
    }
    out
}

/// Calls `f` on every `t`-subset of `0..n` in lexicographic order.
pub(crate) fn for_each_combination(n: usize, t: usize, mut f: impl FnMut(&[usize])) {
    if t > n {
        return;
    }
    let mut idx: Vec<usize> = (0..t).collect();
    loop {
        f(&idx);
        let Some(i) = (0..t).rev().find(|&i| idx[i] < n - t + i) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..t {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Decides whether `design` is a t-design and returns its λ_t.
pub fn verify_t_design(design: &Design, t: usize) -> Result<TDesignCheck> {
    if t == 0 {
        return Err(Error::InvalidParameter("t must be at least 1".into()));
    }
    let v = design.point_count();
    let k = design.block_size();
    let subsets = binom_u64(v, t).filter(|&c| c <= MAX_T_SUBSETS);
    let per_block = binom_u64(k, t);
    let incidences = per_block.and_then(|p| p.checked_mul(design.block_count() as u64));
    let (Some(subsets), Some(incidences)) = (subsets, incidences) else {
        return Err(Error::TooLarge(format!("t = {t} over {v} points is beyond the guard")));
    };
    if incidences > MAX_T_INCIDENCES {
        return Err(Error::TooLarge(format!(
            "{incidences} block/subset incidences exceeds {MAX_T_INCIDENCES}"
        )));
    }
    if t > v {
        return Err(Error::InvalidParameter(format!("t = {t} exceeds the point count {v}")));
    }
    // table[p][j] = C(p, j)
    let table: Vec<Vec<u64>> = (0..=v)
        .map(|p| (0..=t).map(|j| binom_u64(p, j).unwrap_or(u64::MAX)).collect())
        .collect();
    let mut counts = vec![0u32; subsets as usize];
    let mut subset = vec![0usize; t];
    for block in design.blocks() {
        let points: Vec<usize> = block.iter_ones().collect();
        for_each_combination(points.len(), t, |idx| {
            for (s, &i) in subset.iter_mut().zip(idx) {
                *s = points[i];
            }
            counts[colex_rank(&subset, &table) as usize] += 1;
        });
    }
    let reference = counts[0] as u64;
    match counts.iter().position(|&c| c as u64 != reference) {
        None => Ok(TDesignCheck::Uniform { lambda: reference }),
        Some(r) => Ok(TDesignCheck::Deviation {
            subset: colex_unrank(r as u64, t, &table),
            count: counts[r] as u64,
            reference,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    /// Counts d-dimensional subspaces of F₂^n by collecting distinct spans
    /// of all d-tuples of vectors.
    fn brute_force_subspace_count(n: u32, d: usize) -> usize {
        use std::collections::BTreeSet;
        let mut seen = BTreeSet::new();
        let vectors: Vec<u64> = (1..1u64 << n).collect();
        fn rec(vs: &[u64], start: usize, d: usize, basis: &mut Vec<u64>, seen: &mut BTreeSet<Vec<u64>>) {
            if basis.len() == d {
                let mut s = span(basis);
                s.sort_unstable();
                s.dedup();
                if s.len() == 1 << d {
                    seen.insert(s);
                }
                return;
            }
            for i in start..vs.len() {
                basis.push(vs[i]);
                rec(vs, i + 1, d, basis, seen);
                basis.pop();
            }
        }
        rec(&vectors, 0, d, &mut Vec::new(), &mut seen);
        seen.len()
    }

    #[test]
    fn gaussian_coefficient_examples() {
        assert_eq!(gaussian_coefficient(2, 1, 2), big(3));
        assert_eq!(gaussian_coefficient(5, 2, 2), big(155));
        assert_eq!(gaussian_coefficient(7, 4, 2), big(11811));
        assert_eq!(gaussian_coefficient(3, 4, 2), big(0));
        assert_eq!(gaussian_coefficient(3, -1, 2), big(0));
        assert_eq!(gaussian_coefficient(4, 0, 3), big(1));
    }

    #[test]
    fn gaussian_coefficient_matches_subspace_count() {
        for (n, d) in [(3, 1), (4, 2), (5, 2), (5, 3)] {
            assert_eq!(
                gaussian_coefficient(n as i64, d as i64, 2),
                big(brute_force_subspace_count(n, d) as u64),
                "[{n} {d}]_2"
            );
        }
    }

    #[test]
    fn gaussian_coefficient_symmetry() {
        for q in [2u64, 3, 4, 5, 7] {
            for m in 0..9i64 {
                for i in 0..=m {
                    assert_eq!(gaussian_coefficient(m, i, q), gaussian_coefficient(m, m - i, q));
                }
            }
        }
    }

    #[test]
    fn parameter_examples() {
        let p = design_parameters(&GeometrySpec::projective(6, 3, 2).unwrap()).unwrap();
        assert_eq!((p.v, p.k, p.lambda, p.lambda3), (big(127), big(15), big(155), None));
        let p = design_parameters(&GeometrySpec::affine(3, 2, 2).unwrap()).unwrap();
        assert_eq!((p.v, p.k, p.lambda, p.lambda3), (big(8), big(4), big(3), Some(big(1))));
        let p = design_parameters(&GeometrySpec::projective(2, 1, 2).unwrap()).unwrap();
        assert_eq!((p.v, p.k, p.lambda), (big(7), big(3), big(1)));
        // General q is evaluated even though it is not enumerated.
        let p = design_parameters(&GeometrySpec::projective(2, 1, 3).unwrap()).unwrap();
        assert_eq!((p.v, p.k, p.lambda), (big(13), big(4), big(1)));
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(GeometrySpec::projective(3, 0, 2).is_err());
        assert!(GeometrySpec::projective(3, 3, 2).is_err());
        assert!(GeometrySpec::affine(3, 1, 1).is_err());
        let spec = GeometrySpec::projective(2, 1, 3).unwrap();
        assert!(matches!(enumerate_subspaces(&spec), Err(Error::Unsupported(_))));
        let spec = GeometrySpec::projective(20, 10, 2).unwrap();
        assert!(matches!(enumerate_subspaces(&spec), Err(Error::TooLarge(_))));
    }

    #[test]
    fn fano_plane() {
        let fano = enumerate_subspaces(&GeometrySpec::projective(2, 1, 2).unwrap()).unwrap();
        assert_eq!(fano.block_count(), 7);
        assert_eq!(fano.block_size(), 3);
        assert_eq!(verify_t_design(&fano, 2).unwrap(), TDesignCheck::Uniform { lambda: 1 });
        // Brute force: each pair in exactly one line.
        for a in 0..7 {
            for b in a + 1..7 {
                let n = fano.blocks().iter().filter(|bl| bl.get(a) && bl.get(b)).count();
                assert_eq!(n, 1);
            }
        }
        // Not a 3-design: a line's triple lies in one block, a non-collinear one in none.
        assert!(matches!(
            verify_t_design(&fano, 3).unwrap(),
            TDesignCheck::Deviation { .. }
        ));
    }

    #[test]
    fn affine_plane_design_is_3_design() {
        let ag = enumerate_subspaces(&GeometrySpec::affine(3, 2, 2).unwrap()).unwrap();
        assert_eq!(ag.block_count(), 14);
        assert_eq!(ag.block_size(), 4);
        assert_eq!(verify_t_design(&ag, 2).unwrap().lambda(), Some(3));
        assert_eq!(verify_t_design(&ag, 3).unwrap().lambda(), Some(1));
        // Brute force over triples.
        for a in 0..8 {
            for b in a + 1..8 {
                for c in b + 1..8 {
                    let n = ag
                        .blocks()
                        .iter()
                        .filter(|bl| bl.get(a) && bl.get(b) && bl.get(c))
                        .count();
                    assert_eq!(n, 1);
                }
            }
        }
    }

    #[test]
    fn enumerated_designs_match_parameters() {
        let specs = [
            GeometrySpec::projective(3, 1, 2),
            GeometrySpec::projective(3, 2, 2),
            GeometrySpec::projective(4, 2, 2),
            GeometrySpec::affine(4, 2, 2),
            GeometrySpec::affine(4, 3, 2),
            GeometrySpec::affine(5, 2, 2),
        ];
        for spec in specs {
            let spec = spec.unwrap();
            let p = design_parameters(&spec).unwrap();
            let d = enumerate_subspaces(&spec).unwrap();
            assert_eq!(big(d.point_count() as u64), p.v);
            assert_eq!(big(d.block_size() as u64), p.k);
            assert_eq!(
                big(verify_t_design(&d, 2).unwrap().lambda().unwrap()),
                p.lambda,
                "{spec:?}"
            );
            if let Some(l3) = p.lambda3 {
                assert_eq!(big(verify_t_design(&d, 3).unwrap().lambda().unwrap()), l3, "{spec:?}");
            }
            if spec.kind == GeometryKind::Projective {
                assert_eq!(
                    big(d.block_count() as u64),
                    gaussian_coefficient(spec.m as i64 + 1, spec.s as i64 + 1, 2)
                );
            }
            let mut sorted = d.blocks().to_vec();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), d.block_count(), "blocks are distinct");
        }
    }

    #[test]
    fn pg_3_6_2_block_count() {
        let d = enumerate_subspaces(&GeometrySpec::projective(6, 3, 2).unwrap()).unwrap();
        // b = λ v (v-1) / (k (k-1))
        assert_eq!(d.block_count(), 155 * 127 * 126 / (15 * 14));
        assert_eq!(d.block_count(), 11811);
        assert!(d.blocks().iter().all(|b| b.weight() == 15));
    }

    #[test]
    fn deviation_witness_is_reported() {
        let blocks = vec![
            BitVector::from_indices(4, [0, 1]),
            BitVector::from_indices(4, [0, 1]),
            BitVector::from_indices(4, [2, 3]),
        ];
        let d = Design::new(4, blocks).unwrap();
        match verify_t_design(&d, 2).unwrap() {
            TDesignCheck::Deviation {
                subset,
                count,
                reference,
            } => {
                assert_eq!(reference, 2);
                assert_eq!(subset, vec![0, 2]);
                assert_eq!(count, 0);
            }
            other => panic!("expected deviation, got {other:?}"),
        }
    }

    #[test]
    fn colex_rank_round_trip() {
        let table: Vec<Vec<u64>> = (0..=10)
            .map(|p| (0..=3).map(|j| binom_u64(p, j).unwrap()).collect())
            .collect();
        for r in 0..binom_u64(10, 3).unwrap() {
            let s = colex_unrank(r, 3, &table);
            assert_eq!(colex_rank(&s, &table), r);
        }
    }

    #[test]
    fn design_rejects_bad_blocks() {
        assert!(Design::new(3, vec![]).is_err());
        assert!(Design::new(3, vec![BitVector::zeros(4)]).is_err());
        let uneven = vec![BitVector::from_indices(3, [0]), BitVector::from_indices(3, [0, 1])];
        assert!(Design::new(3, uneven).is_err());
    }
}
