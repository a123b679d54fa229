//! Bit-packed vectors and matrices over GF(2).
//!
//! Bit `i` of a vector lives in word `i / 64` at position `i % 64`. Bits
//! past the logical length are kept zero after every operation, so weights
//! and equality can be computed directly on the words.

use std::fmt;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

#[inline]
fn word_count(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; word_count(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self {
            len,
            words: vec![u64::MAX; word_count(len)],
        };
        v.mask_tail();
        v
    }

    /// Builds a vector with the given positions set. Panics on an index `>= len`.
    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.set(i, true);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_indices(bits.len(), bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i))
    }

    /// Wraps raw words; bits beyond `len` are cleared.
    pub fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(word_count(len), 0);
        let mut v = Self { len, words };
        v.mask_tail();
        v
    }

    fn mask_tail(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    /// Hamming weight.
    #[inline]
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn and(&self, other: &Self) -> Self {
        assert_eq!(self.len, other.len, "length mismatch in and");
        Self {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    /// Size of the common support.
    #[inline]
    pub fn and_weight(&self, other: &Self) -> usize {
        assert_eq!(self.len, other.len, "length mismatch in and");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Standard inner product over GF(2).
    #[inline]
    pub fn dot(&self, other: &Self) -> bool {
        self.and_weight(other) % 2 == 1
    }

    /// Indices of set bits in increasing order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD_BITS + b)
                }
            })
        })
    }

    /// Lowest set bit, if any.
    pub fn first_one(&self) -> Option<usize> {
        self.iter_ones().next()
    }

    /// Appends one coordinate at the end.
    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(WORD_BITS) {
            self.words.push(0);
        }
        self.len += 1;
        let i = self.len - 1;
        self.set(i, bit);
    }

    /// Selects coordinates in the given order.
    pub fn select(&self, columns: &[usize]) -> Self {
        Self::from_indices(
            columns.len(),
            columns.iter().enumerate().filter(|(_, &c)| self.get(c)).map(|(i, _)| i),
        )
    }

    /// Drops coordinate `i`.
    pub fn remove(&self, i: usize) -> Self {
        let cols: Vec<usize> = (0..self.len).filter(|&c| c != i).collect();
        self.select(&cols)
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl std::str::FromStr for BitVector {
    type Err = Error;

    /// Parses a string of `0`/`1` characters; other characters are rejected.
    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .enumerate()
            .map(|(i, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse {
                    line: 1,
                    column: i + 1,
                    message: format!("unexpected character {other:?}"),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_bools(&bits))
    }
}

/// Result of reducing a matrix to reduced row echelon form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Echelon {
    /// Same shape as the input; zero rows collected at the bottom.
    pub matrix: BitMatrix,
    /// Pivot column of each nonzero row, strictly increasing.
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Generator matrix reduced to identity on a chosen information set.
///
/// Rows stay in the original coordinate order; row `i` has a one at
/// `info_set[i]` and zeros on every other information position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystematicForm {
    pub generator: BitMatrix,
    pub info_set: Vec<usize>,
    /// Column permutation putting the information set first, then the
    /// remaining columns in increasing order.
    pub permutation: Vec<usize>,
}

/// A dense matrix over GF(2) stored as packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            rows: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            cols: n,
            rows: (0..n).map(|i| BitVector::from_indices(n, [i])).collect(),
        }
    }

    /// Builds a matrix from rows of equal length.
    pub fn from_rows(rows: Vec<BitVector>) -> Result<Self> {
        let cols = rows.first().map_or(0, BitVector::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(format!(
                "row of length {} in a matrix with {cols} columns",
                bad.len()
            )));
        }
        Ok(Self { cols, rows })
    }

    /// Like [`from_rows`](Self::from_rows), but keeps the column count for an empty row list.
    pub fn from_rows_with_cols(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        if rows.is_empty() {
            return Ok(Self { cols, rows });
        }
        let m = Self::from_rows(rows)?;
        if m.cols != cols {
            return Err(Error::DimensionMismatch(format!(
                "expected {cols} columns, got {}",
                m.cols
            )));
        }
        Ok(m)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn row_vectors(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitVector> {
        self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value);
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.iter_ones() {
                out.rows[c].set(r, true);
            }
        }
        out
    }

    /// Product `self * other` over GF(2).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows() {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows(),
                self.cols,
                other.rows(),
                other.cols
            )));
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = BitVector::zeros(other.cols);
                for j in row.iter_ones() {
                    acc.xor_assign(&other.rows[j]);
                }
                acc
            })
            .collect();
        Ok(Self { cols: other.cols, rows })
    }

    /// Computes `self * x^T`, one output bit per row.
    pub fn mul_vec(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok(BitVector::from_bools(
            &self.rows.iter().map(|r| r.dot(x)).collect::<Vec<_>>(),
        ))
    }

    /// Appends `column` as a new last column.
    pub fn append_column(&self, column: &BitVector) -> Result<Self> {
        if column.len() != self.rows() {
            return Err(Error::DimensionMismatch(format!(
                "column of length {} for {} rows",
                column.len(),
                self.rows()
            )));
        }
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut r = r.clone();
                r.push(column.get(i));
                r
            })
            .collect();
        Ok(Self {
            cols: self.cols + 1,
            rows,
        })
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot stack {} columns on {}",
                other.cols, self.cols
            )));
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(Self { cols: self.cols, rows })
    }

    pub fn permute_rows(&self, order: &[usize]) -> Self {
        Self {
            cols: self.cols,
            rows: order.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }

    /// Rank over GF(2).
    pub fn rank(&self) -> usize {
        let mut basis = RowBasis::new(self.cols);
        for row in &self.rows {
            basis.insert(row.clone());
        }
        basis.rank()
    }

    /// Reduced row echelon form by row-pivot elimination. Columns are never
    /// permuted.
    pub fn rref(&self) -> Echelon {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..self.cols {
            if next == rows.len() {
                break;
            }
            let Some(p) = (next..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(next, p);
            let pivot_row = rows[next].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != next && row.get(col) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(col);
            next += 1;
        }
        Echelon {
            matrix: Self { cols: self.cols, rows },
            pivots,
        }
    }

    /// Finds one `x` with `self * x^T = rhs^T`, or `None` if the system is
    /// inconsistent. The returned witness is checked by multiplication.
    pub fn solve(&self, rhs: &BitVector) -> Result<Option<BitVector>> {
        if rhs.len() != self.rows() {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                rhs.len(),
                self.rows()
            )));
        }
        let augmented = self.append_column(rhs)?;
        let ech = augmented.rref();
        if ech.pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = BitVector::zeros(self.cols);
        for (i, &p) in ech.pivots.iter().enumerate() {
            if ech.matrix.rows[i].get(self.cols) {
                x.set(p, true);
            }
        }
        let check = self.mul_vec(&x)?;
        assert_eq!(&check, rhs, "solve produced a non-solution");
        Ok(Some(x))
    }

    /// Basis of `{x : self * x^T = 0}`, one basis vector per free column.
    pub fn null_space(&self) -> Self {
        let ech = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        let rows = (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = BitVector::zeros(self.cols);
                v.set(f, true);
                for (i, &p) in ech.pivots.iter().enumerate() {
                    if ech.matrix.rows[i].get(f) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect();
        Self { cols: self.cols, rows }
    }

    /// Reduces to identity on an information set, choosing pivots by
    /// scanning columns in `column_order`. Only independent rows survive.
    pub fn systematic_form(&self, column_order: &[usize]) -> SystematicForm {
        let mut rows: Vec<BitVector> = self.rows.clone();
        let mut info_set = Vec::new();
        let mut next = 0;
        for &col in column_order {
            if next == rows.len() {
                break;
            }
            let Some(p) = (next..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(next, p);
            let pivot_row = rows[next].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != next && row.get(col) {
                    row.xor_assign(&pivot_row);
                }
            }
            info_set.push(col);
            next += 1;
        }
        rows.truncate(next);
        let mut in_set = vec![false; self.cols];
        for &c in &info_set {
            in_set[c] = true;
        }
        let mut permutation = info_set.clone();
        permutation.extend((0..self.cols).filter(|&c| !in_set[c]));
        SystematicForm {
            generator: Self { cols: self.cols, rows },
            info_set,
            permutation,
        }
    }

    /// True when every row of `self` lies in the row space of `other`.
    pub fn row_space_within(&self, other: &Self) -> bool {
        let mut basis = RowBasis::new(other.cols);
        for r in &other.rows {
            basis.insert(r.clone());
        }
        self.rows.iter().all(|r| basis.reduce(r.clone()).is_zero())
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows(), self.cols)?;
        fmt::Display::fmt(self, f)
    }
}

/// Incrementally built echelon basis, keyed by lowest set bit.
///
/// Inserting a million rows of a 128-column matrix costs at most 128
/// reductions each, which is what makes rank of large codeword lists cheap.
#[derive(Debug, Clone)]
pub struct RowBasis {
    cols: usize,
    by_pivot: Vec<Option<BitVector>>,
    rank: usize,
}

impl RowBasis {
    pub fn new(cols: usize) -> Self {
        Self {
            cols,
            by_pivot: vec![None; cols],
            rank: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Reduces `v` against the basis.
    pub fn reduce(&self, mut v: BitVector) -> BitVector {
        while let Some(p) = first_reducible(&v, &self.by_pivot) {
            v.xor_assign(self.by_pivot[p].as_ref().expect("pivot present"));
        }
        v
    }

    /// Adds `v` if independent. Returns whether the rank grew.
    pub fn insert(&mut self, v: BitVector) -> bool {
        let v = self.reduce(v);
        match v.first_one() {
            Some(p) => {
                self.by_pivot[p] = Some(v);
                self.rank += 1;
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v.clone()).is_zero()
    }

    /// Basis vectors in increasing pivot order.
    pub fn vectors(&self) -> impl Iterator<Item = &BitVector> {
        self.by_pivot.iter().flatten()
    }
}

fn first_reducible(v: &BitVector, by_pivot: &[Option<BitVector>]) -> Option<usize> {
    v.iter_ones().find(|&i| by_pivot[i].is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&str]) -> BitMatrix {
        BitMatrix::from_rows(rows.iter().map(|r| r.parse().unwrap()).collect()).unwrap()
    }

    #[test]
    fn padding_stays_zero() {
        let v = BitVector::ones(70);
        assert_eq!(v.weight(), 70);
        assert_eq!(v.words()[1], (1 << 6) - 1);
        let w = BitVector::from_words(3, vec![u64::MAX]);
        assert_eq!(w.weight(), 3);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::identity(3).rank(), 3);
        assert_eq!(m(&["1100", "0011", "1111"]).rank(), 2);
        assert_eq!(BitMatrix::zeros(0, 5).rank(), 0);
    }

    #[test]
    fn rref_examples() {
        let e = BitMatrix::identity(3).rref();
        assert_eq!(e.matrix, BitMatrix::identity(3));
        assert_eq!(e.pivots, vec![0, 1, 2]);
        let e = m(&["11", "01"]).rref();
        assert_eq!(e.matrix, m(&["10", "01"]));
        assert_eq!(e.pivots, vec![0, 1]);
    }

    #[test]
    fn solve_examples() {
        let a = m(&["1100", "0011"]);
        let x = a.solve(&"11".parse().unwrap()).unwrap().unwrap();
        assert_eq!(a.mul_vec(&x).unwrap(), "11".parse().unwrap());
        let r: BitVector = "101".parse().unwrap();
        assert_eq!(BitMatrix::identity(3).solve(&r).unwrap(), Some(r));
        // x1 + x2 = 1 and x1 + x2 = 0 cannot both hold.
        assert_eq!(m(&["11", "11"]).solve(&"10".parse().unwrap()).unwrap(), None);
        assert!(m(&["11"]).solve(&"10".parse().unwrap()).is_err());
    }

    #[test]
    fn null_space_examples() {
        assert_eq!(BitMatrix::identity(4).null_space().rows(), 0);
        let ns = m(&["1111"]).null_space();
        assert_eq!(ns.rows(), 3);
        assert!(ns.row_vectors().iter().all(|r| r.weight() % 2 == 0));
    }

    #[test]
    fn mul_examples() {
        let a = m(&["101", "011"]);
        assert_eq!(a.mul(&BitMatrix::identity(3)).unwrap(), a);
        assert_eq!(m(&["11"]).mul(&m(&["1", "1"])).unwrap(), m(&["0"]));
        assert!(a.mul(&a).is_err());
    }

    #[test]
    fn systematic_form_records_permutation() {
        let g = m(&["1100", "0110"]);
        let s = g.systematic_form(&[3, 2, 1, 0]);
        assert_eq!(s.info_set, vec![2, 1]);
        assert_eq!(s.permutation, vec![2, 1, 0, 3]);
        for (i, &c) in s.info_set.iter().enumerate() {
            for (j, row) in s.generator.row_vectors().iter().enumerate() {
                assert_eq!(row.get(c), i == j);
            }
        }
        assert!(s.generator.row_space_within(&g) && g.row_space_within(&s.generator));
    }

    fn arb_matrix() -> impl Strategy<Value = BitMatrix> {
        (0usize..12, 1usize..80).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(any::<bool>(), c), r).prop_map(move |rows| {
                BitMatrix::from_rows_with_cols(c, rows.iter().map(|b| BitVector::from_bools(b)).collect()).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn rank_transpose_invariant(a in arb_matrix()) {
            prop_assert_eq!(a.rank(), a.transpose().rank());
            prop_assert!(a.rank() <= a.rows().min(a.cols()));
        }

        #[test]
        fn rank_row_permutation_invariant(a in arb_matrix(), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut order: Vec<usize> = (0..a.rows()).collect();
            order.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            prop_assert_eq!(a.permute_rows(&order).rank(), a.rank());
        }

        #[test]
        fn rref_preserves_row_space(a in arb_matrix()) {
            let e = a.rref();
            prop_assert_eq!(e.rank(), a.rank());
            prop_assert_eq!(e.matrix.rank(), a.rank());
            prop_assert!(e.pivots.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(e.matrix.row_space_within(&a) && a.row_space_within(&e.matrix));
        }

        #[test]
        fn null_space_is_annihilated(a in arb_matrix()) {
            let ns = a.null_space();
            prop_assert_eq!(ns.rows(), a.cols() - a.rank());
            prop_assert_eq!(ns.rank(), ns.rows());
            for b in ns.row_vectors() {
                prop_assert!(a.mul_vec(b).unwrap().is_zero());
            }
        }

        #[test]
        fn solve_round_trip(a in arb_matrix(), bits in proptest::collection::vec(any::<bool>(), 80)) {
            let x = BitVector::from_bools(&bits[..a.cols()]);
            let rhs = a.mul_vec(&x).unwrap();
            let y = a.solve(&rhs).unwrap().expect("consistent by construction");
            prop_assert_eq!(a.mul_vec(&y).unwrap(), rhs);
        }

        #[test]
        fn xor_weight_identity(u in proptest::collection::vec(any::<bool>(), 150), v in proptest::collection::vec(any::<bool>(), 150)) {
            let (u, v) = (BitVector::from_bools(&u), BitVector::from_bools(&v));
            prop_assert_eq!(u.xor(&v).weight() + 2 * u.and_weight(&v), u.weight() + v.weight());
        }
    }
}
