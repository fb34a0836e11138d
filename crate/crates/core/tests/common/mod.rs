#![allow(dead_code)]

use trispec::graph::{generate, Graph, GraphKind};

/// The seed corpus every end-to-end check runs over.
pub fn corpus() -> Vec<(&'static str, Graph)> {
    [
        ("K2", GraphKind::Complete, 2),
        ("K3", GraphKind::Complete, 3),
        ("K4", GraphKind::Complete, 4),
        ("P3", GraphKind::Path, 3),
        ("P4", GraphKind::Path, 4),
        ("C4", GraphKind::Cycle, 4),
        ("C5", GraphKind::Cycle, 5),
        ("S5", GraphKind::Star, 5),
        ("Petersen", GraphKind::Petersen, 10),
    ]
    .into_iter()
    .map(|(name, kind, size)| (name, generate(kind, size).unwrap()))
    .collect()
}

/// Depths `n ≥ 1` whose triangulation has at most `limit` vertices.
pub fn depths_within(g: &Graph, limit: u64) -> Vec<u64> {
    (1..)
        .take_while(|&n| {
            let (nn, _) = trispec::graph::predicted_counts(g.num_vertices(), g.num_edges(), n as usize);
            nn.to_u64().is_some_and(|v| v <= limit)
        })
        .collect()
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
