//! Maximum bipartite matching by Hopcroft–Karp.

use std::collections::VecDeque;

const FREE: usize = usize::MAX;

/// Maximum matching of a bipartite graph with `adj[l]` listing the right
/// neighbours of left vertex `l`. Returns the partner of every left vertex.
/// Neighbours are tried in the given order, so the result is deterministic.
pub fn hopcroft_karp(adj: &[Vec<usize>], right: usize) -> Vec<Option<usize>> {
    let left = adj.len();
    let mut pair_l = vec![FREE; left];
    let mut pair_r = vec![FREE; right];
    let mut dist = vec![0usize; left];

    loop {
        // layered BFS from the free left vertices
        let mut queue = VecDeque::new();
        for l in 0..left {
            if pair_l[l] == FREE {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = usize::MAX;
            }
        }
        let mut reachable = false;
        while let Some(l) = queue.pop_front() {
            for &r in &adj[l] {
                match pair_r[r] {
                    FREE => reachable = true,
                    m if dist[m] == usize::MAX => {
                        dist[m] = dist[l] + 1;
                        queue.push_back(m);
                    }
                    _ => {}
                }
            }
        }
        if !reachable {
            break;
        }
        let mut next = vec![0usize; left];
        for l in 0..left {
            if pair_l[l] == FREE {
                augment(l, adj, &mut pair_l, &mut pair_r, &mut dist, &mut next);
            }
        }
    }
    pair_l.into_iter().map(|r| (r != FREE).then_some(r)).collect()
}

/// Iterative DFS along the BFS layers.
fn augment(
    start: usize,
    adj: &[Vec<usize>],
    pair_l: &mut [usize],
    pair_r: &mut [usize],
    dist: &mut [usize],
    next: &mut [usize],
) -> bool {
    let mut stack = vec![start];
    while let Some(&l) = stack.last() {
        if next[l] == adj[l].len() {
            dist[l] = usize::MAX;
            stack.pop();
            continue;
        }
        let r = adj[l][next[l]];
        next[l] += 1;
        match pair_r[r] {
            FREE => {
                // flip the path: each stacked vertex takes the edge it is exploring
                let mut r = r;
                while let Some(l) = stack.pop() {
                    let prev = pair_l[l];
                    pair_l[l] = r;
                    pair_r[r] = l;
                    r = prev;
                }
                return true;
            }
            m if dist[m] == dist[l] + 1 => stack.push(m),
            _ => {}
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn size(m: &[Option<usize>]) -> usize {
        m.iter().flatten().count()
    }

    #[test]
    fn perfect_on_a_cycle() {
        let adj = vec![vec![0, 1], vec![1, 2], vec![2, 0]];
        let m = hopcroft_karp(&adj, 3);
        assert_eq!(size(&m), 3);
    }

    #[test]
    fn needs_augmenting_path() {
        // greedy would match 0-0 and block 1
        let adj = vec![vec![0, 1], vec![0]];
        let m = hopcroft_karp(&adj, 2);
        assert_eq!(m, vec![Some(1), Some(0)]);
    }

    #[test]
    fn hall_violation() {
        let adj = vec![vec![0], vec![0], vec![1]];
        assert_eq!(size(&hopcroft_karp(&adj, 2)), 2);
    }
}
