#![allow(dead_code)]

use latgate::GramMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

/// `A^T A + I` for a random integer matrix `A`, always positive definite.
pub fn pd_form(max_rank: usize, entry: i64) -> impl Strategy<Value = GramMatrix> {
    (1..=max_rank).prop_flat_map(move |n| {
        prop::collection::vec(-entry..=entry, n * n).prop_map(move |a| {
            let rows: Vec<Vec<i64>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| (0..n).map(|k| a[k * n + i] * a[k * n + j]).sum::<i64>() + (i == j) as i64)
                        .collect()
                })
                .collect();
            GramMatrix::from_i64(&rows).unwrap()
        })
    })
}

pub fn rational(num: std::ops::RangeInclusive<i64>, max_den: i64) -> impl Strategy<Value = BigRational> {
    (num, 1..=max_den).prop_map(|(a, b)| BigRational::new(BigInt::from(a), BigInt::from(b)))
}

pub fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}
