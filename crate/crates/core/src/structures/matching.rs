//! Left-saturating bipartite matching (Hopcroft-Karp) with a Hall witness on failure.

use std::collections::VecDeque;

use super::StructureError;

const NIL: usize = usize::MAX;

/// Matches every left item `i` to a distinct color from `adjacency[i]`.
///
/// Left items are tried in input order and colors in ascending order, so the result is
/// deterministic. On failure the error carries a set of left items with fewer neighbors than members.
pub fn saturating_matching(adjacency: &[Vec<u32>]) -> Result<Vec<u32>, StructureError> {
    let mut colors: Vec<u32> = adjacency.iter().flatten().copied().collect();
    colors.sort_unstable();
    colors.dedup();
    let adj: Vec<Vec<usize>> = adjacency
        .iter()
        .map(|l| {
            let mut v: Vec<usize> = l.iter().map(|c| colors.binary_search(c).expect("present")).collect();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect();
    let nl = adj.len();
    let mut mate_l = vec![NIL; nl];
    let mut mate_r = vec![NIL; colors.len()];
    let mut dist = vec![0u32; nl];

    loop {
        // layered BFS from free left vertices
        let mut q = VecDeque::new();
        for u in 0..nl {
            if mate_l[u] == NIL {
                dist[u] = 0;
                q.push_back(u);
            } else {
                dist[u] = u32::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = q.pop_front() {
            for &r in &adj[u] {
                let w = mate_r[r];
                if w == NIL {
                    found = true;
                } else if dist[w] == u32::MAX {
                    dist[w] = dist[u] + 1;
                    q.push_back(w);
                }
            }
        }
        if !found {
            break;
        }
        let mut augmented = false;
        for u in 0..nl {
            if mate_l[u] == NIL && augment(u, &adj, &mut mate_l, &mut mate_r, &mut dist) {
                augmented = true;
            }
        }
        if !augmented {
            break;
        }
    }

    if let Some(u) = (0..nl).find(|&u| mate_l[u] == NIL) {
        return Err(StructureError::NoSaturatingMatching { witness: hall_witness(u, &adj, &mate_r) });
    }
    Ok(mate_l.iter().map(|&r| colors[r]).collect())
}

fn augment(u: usize, adj: &[Vec<usize>], mate_l: &mut [usize], mate_r: &mut [usize], dist: &mut [u32]) -> bool {
    for i in 0..adj[u].len() {
        let r = adj[u][i];
        let w = mate_r[r];
        if w == NIL || (dist[w] == dist[u] + 1 && augment(w, adj, mate_l, mate_r, dist)) {
            mate_l[u] = r;
            mate_r[r] = u;
            return true;
        }
    }
    dist[u] = u32::MAX;
    false
}

/// Left items reachable from the free item `start` by alternating paths.
fn hall_witness(start: usize, adj: &[Vec<usize>], mate_r: &[usize]) -> Vec<usize> {
    let mut seen_l = vec![false; adj.len()];
    let mut seen_r = vec![false; mate_r.len()];
    let mut stack = vec![start];
    seen_l[start] = true;
    while let Some(u) = stack.pop() {
        for &r in &adj[u] {
            if !seen_r[r] {
                seen_r[r] = true;
                let w = mate_r[r];
                if w != NIL && !seen_l[w] {
                    seen_l[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    (0..adj.len()).filter(|&u| seen_l[u]).collect()
}
