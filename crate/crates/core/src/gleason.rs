//! Gleason completion of doubly-even self-dual weight enumerators.
//!
//! The weight enumerator of a doubly-even self-dual code of length `n`
//! (`n ≡ 0 mod 8`) is `Σ_j b_j g1^{n/8 - 3j} g2^j` for `j = 0..=⌊n/24⌋`, with
//! `g1 = x^8 + 14x^4y^4 + y^8` and `g2 = x^4y^4(x^4 - y^4)^4`. Homogeneous
//! polynomials are stored densely by `y`-degree.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::enumeration::WeightDistribution;
use crate::error::{Error, Result};

/// Gleason coefficients for one length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GleasonModel {
    n: usize,
    coefficients: Vec<BigInt>,
}

impl GleasonModel {
    pub fn new(n: usize, coefficients: Vec<BigInt>) -> Result<Self> {
        check_length(n)?;
        if coefficients.len() != n / 24 + 1 {
            return Err(Error::InvalidParameter(format!(
                "length {n} takes {} Gleason coefficients, got {}",
                n / 24 + 1,
                coefficients.len()
            )));
        }
        Ok(Self { n, coefficients })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `b_0, …, b_t`.
    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    /// Weights whose counts determine the model: `0, 4, …, 4⌊n/24⌋`.
    pub fn determining_weights(n: usize) -> Vec<usize> {
        (0..=n / 24).map(|j| 4 * j).collect()
    }
}

fn check_length(n: usize) -> Result<()> {
    if n == 0 || !n.is_multiple_of(8) {
        return Err(Error::InvalidParameter(format!(
            "length {n} is not a positive multiple of 8"
        )));
    }
    Ok(())
}

type Poly = Vec<BigInt>;

fn poly(coeffs: &[(usize, i64)], len: usize) -> Poly {
    let mut p = vec![BigInt::zero(); len];
    for &(d, c) in coeffs {
        p[d] = BigInt::from(c);
    }
    p
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
            out[i + j] += x * y;
        }
    }
    out
}

fn pow(base: &Poly, mut e: usize) -> Poly {
    let mut acc = vec![BigInt::one()];
    let mut b = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(&acc, &b);
        }
        e >>= 1;
        if e > 0 {
            b = mul(&b, &b);
        }
    }
    acc
}

/// `x^8 + 14x^4y^4 + y^8`
fn g1() -> Poly {
    poly(&[(0, 1), (4, 14), (8, 1)], 9)
}

/// `x^4y^4(x^4 - y^4)^4`
fn g2() -> Poly {
    poly(&[(4, 1), (8, -4), (12, 6), (16, -4), (20, 1)], 25)
}

/// `g1^{n/8 - 3j} g2^j`, degree `n`.
pub fn basis_term(n: usize, j: usize) -> Result<Vec<BigInt>> {
    check_length(n)?;
    if 3 * j > n / 8 {
        return Err(Error::InvalidParameter(format!("no basis term {j} at length {n}")));
    }
    let p = mul(&pow(&g1(), n / 8 - 3 * j), &pow(&g2(), j));
    debug_assert_eq!(p.len(), n + 1);
    Ok(p)
}

/// The length-128 model with the closed forms for `b_0 … b_5`.
pub fn coefficients_n128(a16: &BigInt, a20: &BigInt) -> Result<GleasonModel> {
    if a16.is_negative() || a20.is_negative() {
        return Err(Error::InvalidParameter("codeword counts cannot be negative".into()));
    }
    let b = vec![
        BigInt::from(1),
        BigInt::from(-224),
        BigInt::from(16336),
        BigInt::from(-430656),
        a16 + 3196776,
        a20 - 40 * a16 - 2696256,
    ];
    GleasonModel::new(128, b)
}

/// `Σ_j b_j g1^{n/8-3j} g2^j` as coefficients `A_0 … A_n`.
pub fn expand_polynomial(model: &GleasonModel) -> Vec<BigInt> {
    let mut total = vec![BigInt::zero(); model.n + 1];
    for (j, b) in model.coefficients.iter().enumerate() {
        if b.is_zero() {
            continue;
        }
        let term = basis_term(model.n, j).expect("model length validated");
        for (t, x) in total.iter_mut().zip(term) {
            *t += b * x;
        }
    }
    total
}

/// Expands the model into a weight distribution. Negative coefficients
/// cannot be codeword counts and are rejected.
pub fn expand(model: &GleasonModel) -> Result<WeightDistribution> {
    let poly = expand_polynomial(model);
    if let Some((w, c)) = poly.iter().enumerate().find(|(_, c)| c.is_negative()) {
        return Err(Error::Inconsistent(format!(
            "expansion has negative coefficient {c} at weight {w}"
        )));
    }
    WeightDistribution::from_counts(
        model.n,
        poly.into_iter()
            .enumerate()
            .map(|(w, c)| (w, c.to_biguint().expect("nonnegative"))),
    )
}

/// Solves for the Gleason coefficients from low-weight counts.
///
/// `known` must contain every weight in
/// [`GleasonModel::determining_weights`]; any further entries are checked
/// against the expansion.
pub fn fit(n: usize, known: &BTreeMap<usize, BigInt>) -> Result<GleasonModel> {
    check_length(n)?;
    let needed = GleasonModel::determining_weights(n);
    let missing: Vec<usize> = needed.iter().copied().filter(|w| !known.contains_key(w)).collect();
    if !missing.is_empty() {
        return Err(Error::Insufficient(format!(
            "length {n} needs counts for weights {needed:?}; missing {missing:?}"
        )));
    }
    if let Some(w) = known.keys().find(|&&w| w > n) {
        return Err(Error::Inconsistent(format!("weight {w} exceeds length {n}")));
    }
    let terms: Vec<Poly> = (0..needed.len()).map(|j| basis_term(n, j)).collect::<Result<_>>()?;
    // Lower-triangular in (weight 4i, term j): term j starts at y^{4j}.
    let mut b: Vec<BigRational> = Vec::with_capacity(needed.len());
    for (i, &w) in needed.iter().enumerate() {
        let mut rhs = BigRational::from_integer(known[&w].clone());
        for (j, bj) in b.iter().enumerate() {
            rhs -= bj * BigRational::from_integer(terms[j][w].clone());
        }
        let diag = &terms[i][w];
        if diag.is_zero() {
            return Err(Error::Inconsistent(format!("singular Gleason system at weight {w}")));
        }
        b.push(rhs / BigRational::from_integer(diag.clone()));
    }
    let mut coefficients = Vec::with_capacity(b.len());
    for (j, x) in b.into_iter().enumerate() {
        if !x.is_integer() {
            return Err(Error::Inconsistent(format!(
                "coefficient b_{j} = {x} is not an integer"
            )));
        }
        coefficients.push(x.to_integer());
    }
    if !coefficients[0].is_one() {
        return Err(Error::Inconsistent(format!(
            "A_0 = {} but a code has exactly one zero word",
            coefficients[0]
        )));
    }
    let model = GleasonModel::new(n, coefficients)?;
    let poly = expand_polynomial(&model);
    for (&w, c) in known {
        if &poly[w] != c {
            return Err(Error::Inconsistent(format!(
                "supplied A_{w} = {c} but the completed enumerator gives {}",
                poly[w]
            )));
        }
    }
    expand(&model)?;
    Ok(model)
}

/// Tests `W(x+y, x−y) = 2^k W(x, y)` exactly.
pub fn macwilliams_check(w: &WeightDistribution, k: usize) -> bool {
    let n = w.n();
    // plus[a][d] = coefficient of y^d in (x+y)^a; minus likewise for (x-y)^b.
    let binom_row = |a: usize| -> Vec<BigInt> {
        (0..=a)
            .map(|d| BigInt::from_biguint(Sign::Plus, binomial(BigUint::from(a), BigUint::from(d))))
            .collect()
    };
    let mut transformed = vec![BigInt::zero(); n + 1];
    for (i, count) in w.iter() {
        let plus = binom_row(n - i);
        let minus: Vec<BigInt> = binom_row(i)
            .into_iter()
            .enumerate()
            .map(|(d, c)| if d % 2 == 1 { -c } else { c })
            .collect();
        let count = BigInt::from_biguint(Sign::Plus, count.clone());
        for (a, p) in plus.iter().enumerate() {
            let scaled = &count * p;
            for (b, m) in minus.iter().enumerate() {
                transformed[a + b] += &scaled * m;
            }
        }
    }
    let scale = BigInt::one() << k;
    transformed
        .iter()
        .enumerate()
        .all(|(d, t)| *t == &scale * BigInt::from_biguint(Sign::Plus, w.get(d)))
}

/// The weight distribution of R(3,7), row by row.
pub const REED_MULLER_3_7_TABLE: [(usize, u64); 27] = [
    (0, 1),
    (16, 94488),
    (20, 0),
    (24, 74078592),
    (28, 3128434688),
    (32, 312335197020),
    (36, 18125860315136),
    (40, 552366841342848),
    (44, 9491208609103872),
    (48, 94117043084875944),
    (52, 549823502398291968),
    (56, 1920604779257215744),
    (60, 4051966906789380096),
    (64, 5193595576952890822),
    (68, 4051966906789380096),
    (72, 1920604779257215744),
    (76, 549823502398291968),
    (80, 94117043084875944),
    (84, 9491208609103872),
    (88, 552366841342848),
    (92, 18125860315136),
    (96, 312335197020),
    (100, 3128434688),
    (104, 74078592),
    (108, 0),
    (112, 94488),
    (128, 1),
];

pub fn reed_muller_3_7_distribution() -> WeightDistribution {
    WeightDistribution::from_counts(128, REED_MULLER_3_7_TABLE.iter().map(|&(w, c)| (w, BigUint::from(c))))
        .expect("weights within length")
}

/// Zero rows the length-128 table lists explicitly. No rule is known for
/// other lengths, so none are added there.
pub fn table_zero_rows(n: usize) -> &'static [usize] {
    if n == 128 {
        &[20, 108]
    } else {
        &[]
    }
}

/// Two-column text table: weight, count.
pub fn render_table(d: &WeightDistribution) -> String {
    let mut weights: Vec<usize> = d.iter().map(|(w, _)| w).collect();
    weights.extend_from_slice(table_zero_rows(d.n()));
    weights.sort_unstable();
    weights.dedup();
    let mut out = format!("{:>4}  {}\n", "i", "A_i");
    for w in weights {
        out.push_str(&format!("{:>4}  {}\n", w, d.get(w)));
    }
    out
}
