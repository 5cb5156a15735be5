//! Exact expectation recurrences for the neighbour-copying models.
//!
//! A new node joining a graph of `t` nodes and `m` edges picks a uniform base
//! and copies each out-neighbour with `p_out` and each in-neighbour with
//! `p_in`. Summed over bases, out- and in-degrees both total `m`, so
//! `E[m'] = m (1 + (p_out + p_in) / t) + 1`. With equal probabilities `p`,
//! every edge of the base's neighbourhood closes a triangle when both ends
//! are copied, giving `E[T'] = T (1 + 3 p^2 / t) + 2 p m / t`.

#![allow(dead_code)]

/// Expected edge count after `n` nodes.
pub fn expected_edges(n: usize, p_out: f64, p_in: f64) -> f64 {
    let mut m = 0.0;
    for t in 1..n {
        m = m * (1.0 + (p_out + p_in) / t as f64) + 1.0;
    }
    m
}

/// Expected edge count at every size `1..=n` (index `t - 1`).
pub fn expected_edge_path(n: usize, p_out: f64, p_in: f64) -> Vec<f64> {
    let mut out = vec![0.0];
    for t in 1..n {
        let m = out[t - 1];
        out.push(m * (1.0 + (p_out + p_in) / t as f64) + 1.0);
    }
    out
}

/// Expected triangle count of RefOrCite1 after `n` nodes.
pub fn expected_triangles(n: usize, p: f64) -> f64 {
    let (mut m, mut tri) = (0.0, 0.0);
    for t in 1..n {
        let t = t as f64;
        tri += 2.0 * p * m / t + 3.0 * p * p * tri / t;
        m = m * (1.0 + 2.0 * p / t) + 1.0;
    }
    tri
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Standard error of the mean.
pub fn sem(v: &[f64]) -> f64 {
    let m = mean(v);
    let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64;
    (var / v.len() as f64).sqrt()
}
