//! Spiders with three arms of equal length t: verified copies, extraction
//! from induced trees, and a complete desk-scale search oracle.

use thiserror::Error;

use crate::graph::{Graph, VertexSet};

/// A claimed induced spider: a center, three arms of exactly t vertices each,
/// listed outward from the center.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StttCopy {
    pub center: usize,
    pub arms: [Vec<usize>; 3],
    pub t: usize,
}

impl StttCopy {
    pub fn vertices(&self) -> VertexSet {
        let mut all = vec![self.center];
        for arm in &self.arms {
            all.extend_from_slice(arm);
        }
        VertexSet::from_unsorted(all)
    }
}

/// True iff the 3t+1 vertices are distinct and induce exactly the spider:
/// each arm a path from the center, no chords, arms pairwise non-touching
/// beyond the center.
pub fn verify_sttt(g: &Graph, copy: &StttCopy) -> bool {
    let t = copy.t;
    if t == 0 || copy.arms.iter().any(|a| a.len() != t) {
        return false;
    }
    let mut all = vec![copy.center];
    for arm in &copy.arms {
        all.extend_from_slice(arm);
    }
    if all.iter().any(|&v| v >= g.n()) {
        return false;
    }
    let set = VertexSet::from_unsorted(all.clone());
    if set.len() != 3 * t + 1 {
        return false;
    }
    // Spider edges: center to each arm start, consecutive arm vertices.
    let mut required = Vec::new();
    for arm in &copy.arms {
        required.push((copy.center, arm[0]));
        for w in arm.windows(2) {
            required.push((w[0], w[1]));
        }
    }
    for &(u, v) in &required {
        if !g.has_edge(u, v) {
            return false;
        }
    }
    // Exactly 3t edges among the copy's vertices: no chords anywhere.
    let mut count = 0;
    for (i, &u) in all.iter().enumerate() {
        for &v in &all[i + 1..] {
            if g.has_edge(u, v) {
                count += 1;
            }
        }
    }
    count == 3 * t
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExtractError {
    #[error("terminal {0} lies on the tree path between the other two")]
    InvalidTreeShape(usize),
    #[error("branch toward terminal {terminal} has only {available} vertices past the center, need {needed}")]
    ArmTooShort {
        terminal: usize,
        available: usize,
        needed: usize,
    },
    #[error("tree does not contain terminal {0}")]
    MissingTerminal(usize),
}

/// Path between two vertices inside the induced tree `tree`, endpoints
/// included. BFS over G-edges restricted to the tree's vertices.
fn tree_path(g: &Graph, tree: &VertexSet, from: usize, to: usize) -> Option<Vec<usize>> {
    let mut parent = vec![usize::MAX; g.n()];
    let mut queue = std::collections::VecDeque::new();
    parent[from] = from;
    queue.push_back(from);
    while let Some(v) = queue.pop_front() {
        if v == to {
            let mut path = vec![to];
            let mut cur = to;
            while cur != from {
                cur = parent[cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for &u in g.neighbors(v) {
            if tree.contains(u) && parent[u] == usize::MAX {
                parent[u] = v;
                queue.push_back(u);
            }
        }
    }
    None
}

/// Extracts a verified spider from an induced tree containing the three
/// terminals: the center is the unique meeting vertex of the pairwise tree
/// paths, and each arm takes the first t vertices toward its terminal.
pub fn extract_sttt(
    g: &Graph,
    tree: &VertexSet,
    terminals: [usize; 3],
    t: usize,
) -> Result<StttCopy, ExtractError> {
    for z in terminals {
        if !tree.contains(z) {
            return Err(ExtractError::MissingTerminal(z));
        }
    }
    let [x, y, z] = terminals;
    let path_xy = tree_path(g, tree, x, y).expect("tree is connected");
    let path_xz = tree_path(g, tree, x, z).expect("tree is connected");
    // The center: last common vertex of the two paths out of x.
    let common: Vec<usize> = path_xy
        .iter()
        .zip(path_xz.iter())
        .take_while(|(a, b)| a == b)
        .map(|(&a, _)| a)
        .collect();
    let center = *common.last().expect("paths share at least x");
    if terminals.contains(&center) {
        return Err(ExtractError::InvalidTreeShape(center));
    }

    let mut arms: [Vec<usize>; 3] = Default::default();
    for (i, &term) in terminals.iter().enumerate() {
        let path = tree_path(g, tree, center, term).expect("tree is connected");
        let beyond = &path[1..];
        if beyond.len() < t {
            return Err(ExtractError::ArmTooShort {
                terminal: term,
                available: beyond.len(),
                needed: t,
            });
        }
        arms[i] = beyond[..t].to_vec();
    }
    let copy = StttCopy { center, arms, t };
    debug_assert!(verify_sttt(g, &copy), "extraction from an induced tree must verify");
    Ok(copy)
}

/// Result of the complete spider search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StttSearch {
    Found(StttCopy),
    /// The search space was exhausted; no copy exists.
    NoneProven,
    /// The step budget ran out before exhaustion.
    BudgetExceeded,
}

/// All induced paths (center, a1, .., at) where only a1 touches the center,
/// returned without the center and in sorted order.
fn grow_arms(g: &Graph, center: usize, t: usize, steps: &mut usize, budget: usize) -> Result<Vec<Vec<usize>>, ()> {
    let mut arms = Vec::new();
    let mut stack: Vec<Vec<usize>> = g.neighbors(center).iter().map(|&a| vec![a]).collect();
    while let Some(arm) = stack.pop() {
        *steps += 1;
        if *steps > budget {
            return Err(());
        }
        if arm.len() == t {
            arms.push(arm);
            continue;
        }
        let last = *arm.last().unwrap();
        for &next in g.neighbors(last) {
            if next == center || g.has_edge(next, center) {
                continue;
            }
            if arm.contains(&next) {
                continue;
            }
            // No chord back to any earlier arm vertex.
            if arm[..arm.len() - 1].iter().any(|&p| g.has_edge(p, next)) {
                continue;
            }
            let mut longer = arm.clone();
            longer.push(next);
            stack.push(longer);
        }
    }
    arms.sort();
    Ok(arms)
}

fn arms_touch(g: &Graph, a: &[usize], b: &[usize]) -> bool {
    a.iter().any(|&u| b.iter().any(|&v| u == v || g.has_edge(u, v)))
}

/// Complete search for an induced spider: enumerate centers, grow induced
/// arms, and combine three pairwise non-touching arms. `budget` caps
/// elementary search steps; `NoneProven` is exact.
pub fn find_sttt_exhaustive(g: &Graph, t: usize, budget: usize) -> StttSearch {
    assert!(t >= 1);
    let mut steps = 0usize;
    for center in 0..g.n() {
        if g.degree(center) < 3 {
            continue;
        }
        let arms = match grow_arms(g, center, t, &mut steps, budget) {
            Ok(arms) => arms,
            Err(()) => return StttSearch::BudgetExceeded,
        };
        let m = arms.len();
        // Pairwise compatibility first; the triple loop then runs on bits.
        let mut compat = vec![Vec::with_capacity(m); m];
        for i in 0..m {
            for j in 0..m {
                let ok = i != j && !arms_touch(g, &arms[i], &arms[j]);
                compat[i].push(ok);
                steps += 1;
                if steps > budget {
                    return StttSearch::BudgetExceeded;
                }
            }
        }
        for i in 0..m {
            for j in i + 1..m {
                if !compat[i][j] {
                    continue;
                }
                for k in j + 1..m {
                    steps += 1;
                    if steps > budget {
                        return StttSearch::BudgetExceeded;
                    }
                    if !compat[i][k] || !compat[j][k] {
                        continue;
                    }
                    let copy = StttCopy {
                        center,
                        arms: [arms[i].clone(), arms[j].clone(), arms[k].clone()],
                        t,
                    };
                    debug_assert!(verify_sttt(g, &copy));
                    return StttSearch::Found(copy);
                }
            }
        }
    }
    StttSearch::NoneProven
}

#[cfg(test)]
mod tests {
    use super::*;

    fn claw() -> Graph {
        Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)])
    }

    #[test]
    fn verify_claw() {
        let g = claw();
        let copy = StttCopy {
            center: 0,
            arms: [vec![1], vec![2], vec![3]],
            t: 1,
        };
        assert!(verify_sttt(&g, &copy));
    }

    #[test]
    fn verify_rejects_cross_arm_edge() {
        let mut g = claw();
        g.add_edge(1, 2);
        let copy = StttCopy {
            center: 0,
            arms: [vec![1], vec![2], vec![3]],
            t: 1,
        };
        assert!(!verify_sttt(&g, &copy));
    }

    #[test]
    fn verify_planted_t2_spider_with_noise() {
        // Spider: center 0, arms 1-2, 3-4, 5-6; noise vertices 7, 8 attached
        // outside the copy.
        let g = Graph::from_edges(
            9,
            &[
                (0, 1),
                (1, 2),
                (0, 3),
                (3, 4),
                (0, 5),
                (5, 6),
                (7, 2),
                (7, 8),
                (8, 4),
            ],
        );
        let copy = StttCopy {
            center: 0,
            arms: [vec![1, 2], vec![3, 4], vec![5, 6]],
            t: 2,
        };
        assert!(verify_sttt(&g, &copy));
    }

    #[test]
    fn extract_from_claw() {
        let g = claw();
        let copy = extract_sttt(&g, &g.vertex_set(), [1, 2, 3], 1).unwrap();
        assert_eq!(copy.center, 0);
        assert!(verify_sttt(&g, &copy));
    }

    #[test]
    fn extract_trims_long_arms() {
        // Spider with arms of length 3; t = 2 trims each arm.
        let g = Graph::from_edges(
            10,
            &[
                (0, 1),
                (1, 2),
                (2, 3),
                (0, 4),
                (4, 5),
                (5, 6),
                (0, 7),
                (7, 8),
                (8, 9),
            ],
        );
        let copy = extract_sttt(&g, &g.vertex_set(), [3, 6, 9], 2).unwrap();
        assert_eq!(copy.center, 0);
        assert_eq!(copy.arms, [vec![1, 2], vec![4, 5], vec![7, 8]]);
        assert!(verify_sttt(&g, &copy));
    }

    #[test]
    fn extract_rejects_collinear_terminals() {
        let g = Graph::path(5);
        assert_eq!(
            extract_sttt(&g, &g.vertex_set(), [0, 2, 4], 1),
            Err(ExtractError::InvalidTreeShape(2))
        );
    }

    #[test]
    fn extract_rejects_short_arm() {
        let g = claw();
        assert!(matches!(
            extract_sttt(&g, &g.vertex_set(), [1, 2, 3], 2),
            Err(ExtractError::ArmTooShort { .. })
        ));
    }

    #[test]
    fn search_finds_claw() {
        let g = claw();
        match find_sttt_exhaustive(&g, 1, 10_000) {
            StttSearch::Found(copy) => assert!(verify_sttt(&g, &copy)),
            other => panic!("expected a copy, got {other:?}"),
        }
    }

    #[test]
    fn search_proves_absence_on_cycle() {
        let g = Graph::cycle(7);
        assert_eq!(find_sttt_exhaustive(&g, 1, 100_000), StttSearch::NoneProven);
    }

    #[test]
    fn search_budget_semantics() {
        let g = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert_eq!(find_sttt_exhaustive(&g, 1, 1), StttSearch::BudgetExceeded);
    }
}
