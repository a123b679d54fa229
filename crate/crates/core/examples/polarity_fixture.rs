//! Writes the bordered 64 x 128 generator matrix of the extended code of the
//! polarity design obtained from PG(6,2).
//!
//! Points are the nonzero vectors of F₂^7 (index = value - 1). The hyperplane
//! H is the set of vectors with coordinate 6 equal to zero, and the polarity
//! of H ≅ PG(5,2) is orthogonality under the symplectic form
//! x0 y1 + x1 y0 + x2 y3 + x3 y2 + x4 y5 + x5 y4. Blocks of PG_3(6,2) inside H
//! are kept; every other block S becomes (S \ H) ∪ (S ∩ H)^⊥.
//!
//! The first 64 independent blocks, each followed by its parity bit, form the
//! generator matrix.
//!
//! Usage: cargo run --release --example polarity_fixture -- [symplectic|dot] > data/bordered_genmatrix.txt

use sdcode::geometry::{enumerate_subspaces, GeometrySpec};
use sdcode::gf2::{BitMatrix, BitVector, RowBasis};

const H_MASK: u64 = 1 << 6;

fn form(kind: &str, x: u64, y: u64) -> bool {
    match kind {
        "dot" => (x & y).count_ones() % 2 == 1,
        _ => {
            // Swap adjacent coordinate pairs of y, then take the dot product.
            let swapped = ((y & 0b010101) << 1) | ((y & 0b101010) >> 1);
            (x & swapped).count_ones() % 2 == 1
        }
    }
}

fn polarity_design(kind: &str) -> Vec<BitVector> {
    let pg = enumerate_subspaces(&GeometrySpec::projective(6, 3, 2).unwrap()).unwrap();
    pg.blocks()
        .iter()
        .map(|block| {
            let points: Vec<u64> = block.iter_ones().map(|i| i as u64 + 1).collect();
            if points.iter().all(|p| p & H_MASK == 0) {
                return block.clone();
            }
            let at_infinity: Vec<u64> = points.iter().copied().filter(|p| p & H_MASK == 0).collect();
            let perp = (1..64u64).filter(|&y| at_infinity.iter().all(|&u| !form(kind, u, y)));
            let affine = points.iter().copied().filter(|p| p & H_MASK != 0);
            BitVector::from_indices(127, affine.chain(perp).map(|p| p as usize - 1))
        })
        .collect()
}

fn main() {
    let kind = std::env::args().nth(1).unwrap_or_else(|| "symplectic".into());
    let blocks = polarity_design(&kind);
    assert!(blocks.iter().all(|b| b.weight() == 15));
    let mut basis = RowBasis::new(127);
    let mut rows = Vec::new();
    for b in &blocks {
        if basis.insert(b.clone()) {
            let mut row = b.clone();
            row.push(true);
            rows.push(row);
        }
    }
    eprintln!("2-rank of the polarity design: {}", rows.len());
    let g = BitMatrix::from_rows(rows).unwrap();
    print!("{g}");
}
