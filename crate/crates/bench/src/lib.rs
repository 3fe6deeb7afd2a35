//! Fixtures shared by the benchmarks.

use phigamma::{Field, LaurentSeries, Precision, TateRing};

/// `F_{p^f}` with its default modulus and the Tate ring at default precision.
pub fn ring(p: u32, f: u32) -> (Field, TateRing) {
    let field = Field::with_degrees(p, f, f).expect("field");
    let ring = TateRing::new(&field, Precision::default_for(p, f as usize)).expect("ring");
    (field, ring)
}

/// A dense unit series `1 + Σ_{k≥1} a_k π^k` with deterministic pseudo-random coefficients.
pub fn dense_unit(field: &Field, order: i64, seed: u64) -> LaurentSeries {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let ints = (0..order)
        .map(|k| {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            if k == 0 {
                1
            } else {
                (state >> 33) as i64
            }
        })
        .collect::<Vec<_>>();
    LaurentSeries::from_ints(field, 0, order, &ints)
}
