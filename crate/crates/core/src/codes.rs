//! Binary linear codes: constructions and structural predicates.

use std::io::{Read, Write};
use std::path::Path;

use num_integer::binomial;

use crate::error::{Error, Result};
use crate::format;
use crate::gf2::{BitMatrix, BitVector, RowBasis, SystematicForm};

/// Systematic form on one of a family of (mostly) disjoint information sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InformationSet {
    pub form: SystematicForm,
    /// How many of the information positions were not used by earlier sets.
    pub fresh: usize,
}

/// A binary linear `[n, k]` code given by a basis of its row space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    generator: BitMatrix,
    info_sets: Vec<InformationSet>,
}

impl LinearCode {
    /// The code spanned by `rows`. Independent rows are kept in their input
    /// order; dependent rows are dropped.
    pub fn from_span(rows: &BitMatrix) -> Result<Self> {
        let mut basis = RowBasis::new(rows.cols());
        let kept: Vec<BitVector> = rows
            .row_vectors()
            .iter()
            .filter(|r| basis.insert((*r).clone()))
            .cloned()
            .collect();
        if kept.is_empty() {
            return Err(Error::InvalidParameter("rows span the zero code".into()));
        }
        Ok(Self::from_basis(BitMatrix::from_rows(kept)?))
    }

    fn from_basis(generator: BitMatrix) -> Self {
        let info_sets = disjoint_information_sets(&generator);
        Self { generator, info_sets }
    }

    /// Reed–Muller code R(r, m). Rows evaluate the monomials of degree at
    /// most `r` in graded lexicographic order over the points of F₂^m in
    /// integer order; coordinate `i` of a point is bit `i`.
    pub fn reed_muller(r: u32, m: u32) -> Result<Self> {
        if r > m {
            return Err(Error::InvalidParameter(format!("order r = {r} exceeds m = {m}")));
        }
        if m > 20 {
            return Err(Error::TooLarge(format!("R({r},{m}) has length 2^{m}")));
        }
        let n = 1usize << m;
        let mut rows = Vec::new();
        for degree in 0..=r as usize {
            crate::geometry::for_each_combination(m as usize, degree, |vars| {
                let mask: usize = vars.iter().map(|&v| 1 << v).sum();
                rows.push(BitVector::from_indices(n, (0..n).filter(|p| p & mask == mask)));
            });
        }
        Ok(Self::from_basis(BitMatrix::from_rows(rows)?))
    }

    /// Appends an overall parity coordinate.
    pub fn extend(&self) -> Self {
        let parity = BitVector::from_bools(
            &self
                .generator
                .row_vectors()
                .iter()
                .map(|r| r.weight() % 2 == 1)
                .collect::<Vec<_>>(),
        );
        Self::from_basis(self.generator.append_column(&parity).expect("one bit per row"))
    }

    /// Deletes coordinate `i`. Fails if the result loses dimension.
    pub fn puncture(&self, i: usize) -> Result<Self> {
        if i >= self.n() {
            return Err(Error::InvalidParameter(format!("coordinate {i} out of range")));
        }
        let rows: Vec<BitVector> = self.generator.row_vectors().iter().map(|r| r.remove(i)).collect();
        let code = Self::from_span(&BitMatrix::from_rows_with_cols(self.n() - 1, rows)?)?;
        if code.k() != self.k() {
            return Err(Error::Precondition(format!(
                "puncturing coordinate {i} drops the dimension"
            )));
        }
        Ok(code)
    }

    /// The dual code. The full space has no nonzero dual and is rejected.
    pub fn dual(&self) -> Result<Self> {
        if self.k() == self.n() {
            return Err(Error::InvalidParameter(
                "the dual of the full space is the zero code".into(),
            ));
        }
        Ok(Self::from_basis(self.generator.null_space()))
    }

    pub fn n(&self) -> usize {
        self.generator.cols()
    }

    pub fn k(&self) -> usize {
        self.generator.rows()
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    /// Systematic forms on greedily chosen, mostly disjoint information sets.
    pub fn information_sets(&self) -> &[InformationSet] {
        &self.info_sets
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        v.len() == self.n() && self.basis().contains(v)
    }

    pub(crate) fn basis(&self) -> RowBasis {
        let mut b = RowBasis::new(self.n());
        for r in self.generator.row_vectors() {
            b.insert(r.clone());
        }
        b
    }

    /// True when both codes have the same length and row space.
    pub fn same_code(&self, other: &Self) -> bool {
        self.n() == other.n() && self.k() == other.k() && other.generator.row_space_within(&self.generator)
    }

    /// Codeword for the message `bits` (one bit per generator row).
    pub fn encode(&self, message: &BitVector) -> BitVector {
        assert_eq!(message.len(), self.k());
        let mut c = BitVector::zeros(self.n());
        for i in message.iter_ones() {
            c.xor_assign(self.generator.row(i));
        }
        c
    }

    /// Every pair of codewords is orthogonal.
    pub fn is_self_orthogonal(&self) -> bool {
        let rows = self.generator.row_vectors();
        rows.iter()
            .enumerate()
            .all(|(i, a)| rows[i..].iter().all(|b| !a.dot(b)))
    }

    pub fn is_self_dual(&self) -> bool {
        self.n() == 2 * self.k() && self.is_self_orthogonal()
    }

    /// All codeword weights are divisible by 4. Checked as: every basis row
    /// has weight ≡ 0 (mod 4) and all pairwise intersections are even.
    pub fn is_doubly_even(&self) -> bool {
        self.generator.row_vectors().iter().all(|r| r.weight() % 4 == 0) && self.is_self_orthogonal()
    }

    /// Reads a generator matrix file (rows of `0`/`1`).
    pub fn load_generator(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_span(&format::parse_generator_matrix(&text)?)
    }

    pub fn read_generator(mut reader: impl Read) -> Result<Self> {
        let mut text = String::new();
        reader.read_to_string(&mut text)?;
        Self::from_span(&format::parse_generator_matrix(&text)?)
    }

    pub fn save_generator(&self, writer: impl Write) -> Result<()> {
        format::write_generator_matrix(&self.generator, writer)
    }

    /// Dimension of R(r, m): Σ_{i ≤ r} C(m, i).
    pub fn reed_muller_dimension(r: u32, m: u32) -> usize {
        (0..=r.min(m) as usize).map(|i| binomial(m as usize, i)).sum()
    }
}

/// Greedy information sets: each new systematic form scans the columns not
/// yet used as pivots first, then the used ones. Stops once every column
/// has been a pivot or a form brings no fresh pivot.
fn disjoint_information_sets(generator: &BitMatrix) -> Vec<InformationSet> {
    let n = generator.cols();
    let k = generator.rows();
    let mut used = vec![false; n];
    let mut sets: Vec<InformationSet> = Vec::new();
    loop {
        let mut order: Vec<usize> = (0..n).filter(|&c| !used[c]).collect();
        order.extend((0..n).filter(|&c| used[c]));
        let form = generator.systematic_form(&order);
        debug_assert_eq!(form.info_set.len(), k);
        let fresh = form.info_set.iter().filter(|&&c| !used[c]).count();
        if fresh == 0 {
            break;
        }
        for &c in &form.info_set {
            used[c] = true;
        }
        sets.push(InformationSet { form, fresh });
        if used.iter().all(|&u| u) {
            break;
        }
    }
    sets
}
