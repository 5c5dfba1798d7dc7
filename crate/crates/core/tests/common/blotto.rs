//! Colonel Blotto with 3 battlefields and 5 resources as a plain matrix game.

/// Blotto payoff matrix built independently from the game tree.
pub fn payoff_matrix() -> Vec<Vec<f64>> {
    let mut allocations = Vec::new();
    for a in 0..=5u32 {
        for b in 0..=5 - a {
            allocations.push([a, b, 5 - a - b]);
        }
    }
    assert_eq!(allocations.len(), 21);
    allocations
        .iter()
        .map(|x| {
            allocations
                .iter()
                .map(|y| {
                    x.iter()
                        .zip(y)
                        .map(|(p, q)| (p > q) as i32 as f64 - (p < q) as i32 as f64)
                        .sum()
                })
                .collect()
        })
        .collect()
}
