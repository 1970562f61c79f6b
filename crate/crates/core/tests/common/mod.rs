//! Shared test oracles and fixtures. Oracles here are computed from first
//! principles and never call into the crate's measure implementations.

#![allow(dead_code)]

use std::path::PathBuf;

use ineq::panel::{parse_panel, Panel, SchemaConfig};
use rand::Rng;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

pub fn load_fixture(name: &str) -> Panel {
    let text = std::fs::read_to_string(data_path(name)).expect("fixture readable");
    let (panel, diags) = parse_panel(&text, &SchemaConfig::default()).expect("fixture parses");
    assert!(diags.is_empty(), "fixture {name} has bad rows: {diags:?}");
    panel
}

/// One printed row of a results table.
#[derive(Debug, Clone)]
pub struct PrintedRow {
    pub rank: usize,
    pub country: String,
    pub gini: f64,
    pub index_i: f64,
    pub t_over_b: f64,
    pub h: f64,
}

pub fn printed_table(name: &str) -> Vec<PrintedRow> {
    let mut reader = csv::Reader::from_path(data_path(name)).expect("table readable");
    reader
        .records()
        .map(|r| {
            let r = r.expect("row");
            let num = |i: usize| r[i].parse::<f64>().expect("number");
            PrintedRow {
                rank: r[0].parse().expect("rank"),
                country: r[1].to_string(),
                gini: num(4),
                index_i: num(5),
                t_over_b: num(6),
                h: num(7),
            }
        })
        .collect()
}

/// Mean absolute difference form: sum_i sum_j |y_i - y_j| / (2 n^2 mean).
pub fn pairwise_gini(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let mut total = 0.0;
    for &a in values {
        for &b in values {
            total += (a - b).abs();
        }
    }
    total / (2.0 * n * n * mean)
}

/// Share of the poorest `k` units out of an integer-valued sample, by direct
/// summation after sorting.
pub fn direct_bottom_share(values: &[f64], k: usize) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v[..k].iter().sum::<f64>() / v.iter().sum::<f64>()
}

pub fn direct_top_share(values: &[f64], k: usize) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v[v.len() - k..].iter().sum::<f64>() / v.iter().sum::<f64>()
}

/// Random sample with a mix of shapes; `allow_zeros` sprinkles exact zeros.
pub fn random_sample<R: Rng>(rng: &mut R, max_len: usize, allow_zeros: bool) -> Vec<f64> {
    let n = rng.gen_range(1..=max_len);
    let shape = rng.gen_range(0..3);
    let mut v: Vec<f64> = (0..n)
        .map(|_| {
            let u: f64 = rng.gen_range(1e-9..1.0);
            match shape {
                0 => rng.gen_range(0.0..100.0),
                1 => -u.ln() * 10.0,
                _ => u.powf(-1.0 / 2.5),
            }
        })
        .collect();
    if allow_zeros {
        for x in v.iter_mut() {
            if rng.gen_bool(0.1) {
                *x = 0.0;
            }
        }
    }
    if v.iter().all(|&x| x == 0.0) {
        v[0] = 1.0;
    }
    v
}

/// Strictly positive sample with bounded spread.
pub fn positive_sample<R: Rng>(rng: &mut R, max_len: usize) -> Vec<f64> {
    let n = rng.gen_range(2..=max_len);
    (0..n).map(|_| rng.gen_range(0.5..10.0)).collect()
}
