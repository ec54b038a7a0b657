#![allow(dead_code)]

use lesem::{Polarity, ReflexiveGraph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// The 3×3 plays context.
pub fn plays() -> Polarity {
    Polarity::new(
        names(&["a", "b", "c"]),
        names(&["x", "y", "z"]),
        [("a", "z"), ("b", "x"), ("c", "x"), ("c", "y")],
    )
    .unwrap()
}

/// u → v → z with self-loops.
pub fn witness() -> ReflexiveGraph {
    ReflexiveGraph::new(
        names(&["u", "v", "z"]),
        [("u", "u"), ("v", "v"), ("z", "z"), ("u", "v"), ("v", "z")],
    )
    .unwrap()
}

/// Every edge except u → z.
pub fn craig() -> ReflexiveGraph {
    let n = ["u", "v", "z"];
    let edges: Vec<(&str, &str)> = n
        .iter()
        .flat_map(|&a| n.iter().map(move |&b| (a, b)))
        .filter(|&(a, b)| (a, b) != ("u", "z"))
        .collect();
    ReflexiveGraph::new(names(&n), edges).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
