//! Named example digraphs and random instance generators.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::digraph::{Arc, WeightedDigraph};
use crate::scalar::{integer, Rational};

/// `j -> i -> k -> t` with weights 4, 1, 1; vertex order (j, i, k, t).
pub fn path_digraph() -> WeightedDigraph {
    WeightedDigraph::from_labeled(
        &["j", "i", "k", "t"],
        &[
            ("j", "i", integer(4)),
            ("i", "k", integer(1)),
            ("k", "t", integer(1)),
        ],
    )
    .expect("valid fixture")
}

/// Arcs (i,k)=4, (k,t)=1, (t,j)=4; vertex order (i, j, k, t).
pub fn transit_digraph() -> WeightedDigraph {
    WeightedDigraph::from_labeled(
        &["i", "j", "k", "t"],
        &[
            ("i", "k", integer(4)),
            ("k", "t", integer(1)),
            ("t", "j", integer(4)),
        ],
    )
    .expect("valid fixture")
}

/// The cycle i -> j -> k -> t -> i with weights 1, 10, 10, 1.
pub fn weighted_four_cycle() -> WeightedDigraph {
    WeightedDigraph::from_labeled(
        &["i", "j", "k", "t"],
        &[
            ("i", "j", integer(1)),
            ("j", "k", integer(10)),
            ("k", "t", integer(10)),
            ("t", "i", integer(1)),
        ],
    )
    .expect("valid fixture")
}

/// `n` vertices, at most `max_arcs` distinct arcs, integer weights in `1..=max_weight`.
pub fn random_digraph<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    max_arcs: usize,
    max_weight: i64,
) -> WeightedDigraph {
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    pairs.shuffle(rng);
    let m = rng.gen_range(0..=max_arcs.min(pairs.len()));
    let arcs = pairs[..m]
        .iter()
        .map(|&(tail, head)| Arc {
            tail,
            head,
            weight: integer(rng.gen_range(1..=max_weight)),
        })
        .collect();
    WeightedDigraph::new(labels(n), arcs).expect("generator produces valid digraphs")
}

/// Random digraph where every arc has a reverse twin of the same weight.
pub fn random_symmetric_digraph<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    max_edges: usize,
    max_weight: i64,
) -> WeightedDigraph {
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    pairs.shuffle(rng);
    let m = rng.gen_range(0..=max_edges.min(pairs.len()));
    let mut arcs = Vec::new();
    for &(a, b) in &pairs[..m] {
        let w: Rational = integer(rng.gen_range(1..=max_weight));
        arcs.push(Arc {
            tail: a,
            head: b,
            weight: w.clone(),
        });
        arcs.push(Arc {
            tail: b,
            head: a,
            weight: w,
        });
    }
    WeightedDigraph::new(labels(n), arcs).expect("generator produces valid digraphs")
}

fn labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("v{i}")).collect()
}
