use std::collections::VecDeque;

use crate::error::Result;
use crate::netcore::Network;

use super::require_nonpositive;

/// Largest subset `S` of `seed` with `k_i(S) > |c|` for every member.
///
/// Peels every member with `k_i(S) <= |c|` until none is left. Removing a
/// member turns one in-link of each remaining neighbour into an out-link,
/// lowering its `k` by exactly 2, so removals never become undone and the
/// result does not depend on removal order. An empty result means no
/// subset of the seed can hold on to the less attractive identity.
///
/// `seed = None` starts from the whole vertex set. Output is ascending.
pub fn find_blocking_set(net: &Network, c: f64, seed: Option<&[usize]>) -> Result<Vec<usize>> {
    require_nonpositive(c)?;
    let bound = c.abs();
    let n = net.n();
    let mut inside = vec![false; n];
    match seed {
        Some(s) => {
            for &i in s {
                net.check_index(i)?;
                inside[i] = true;
            }
        }
        None => inside.iter_mut().for_each(|x| *x = true),
    }

    let mut k = vec![0i64; n];
    let mut queue = VecDeque::new();
    let mut queued = vec![false; n];
    for i in (0..n).filter(|&i| inside[i]) {
        let din = net.neighbors(i).iter().filter(|&&j| inside[j]).count() as i64;
        k[i] = 2 * din - net.neighbors(i).len() as i64;
        if k[i] as f64 <= bound {
            queue.push_back(i);
            queued[i] = true;
        }
    }
    while let Some(i) = queue.pop_front() {
        inside[i] = false;
        for &j in net.neighbors(i) {
            if inside[j] && !queued[j] {
                k[j] -= 2;
                if k[j] as f64 <= bound {
                    queue.push_back(j);
                    queued[j] = true;
                }
            }
        }
    }
    Ok((0..n).filter(|&i| inside[i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcore::{link_difference, Connectivity};

    fn two_cliques(size: usize) -> Network {
        let mut edges = Vec::new();
        for base in [0, size] {
            for i in 0..size {
                for j in i + 1..size {
                    edges.push((base + i, base + j));
                }
            }
        }
        edges.push((size - 1, size));
        Network::new(2 * size, &edges, Connectivity::Required).unwrap()
    }

    #[test]
    fn clique_survives_moderate_cost() {
        let net = two_cliques(5);
        let seed = [0, 1, 2, 3, 4];
        assert_eq!(find_blocking_set(&net, -2.0, Some(&seed)).unwrap(), vec![0, 1, 2, 3, 4]);
        // whole graph is itself blocking at c = -2 (min degree 4)
        assert_eq!(find_blocking_set(&net, -2.0, None).unwrap().len(), 10);
        // bridge k = 3 survives -2.5 inside a single clique
        assert_eq!(find_blocking_set(&net, -2.5, Some(&seed)).unwrap(), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn clique_unravels_at_high_cost() {
        let net = two_cliques(5);
        assert!(find_blocking_set(&net, -3.5, Some(&[0, 1, 2, 3, 4])).unwrap().is_empty());
        // the whole graph still blocks until |c| reaches the minimum degree 4
        assert_eq!(find_blocking_set(&net, -3.5, None).unwrap().len(), 10);
        assert!(find_blocking_set(&net, -4.0, None).unwrap().is_empty());
        // equality peels: bridge k = 3 is not > 3
        assert!(find_blocking_set(&net, -3.0, Some(&[0, 1, 2, 3, 4])).unwrap().is_empty());
    }

    #[test]
    fn star_has_no_blocking_set() {
        let edges: Vec<(usize, usize)> = (1..6).map(|i| (0, i)).collect();
        let net = Network::new(6, &edges, Connectivity::Required).unwrap();
        for c in [-1.01, -1.5, -3.0, -10.0] {
            assert!(find_blocking_set(&net, c, None).unwrap().is_empty());
        }
    }

    #[test]
    fn survivors_satisfy_condition_and_positive_c_rejected() {
        let net = two_cliques(4);
        let s = find_blocking_set(&net, -1.5, None).unwrap();
        let view = link_difference(&net, &s).unwrap();
        assert!(view.ks().into_iter().all(|k| k as f64 > 1.5));
        assert!(find_blocking_set(&net, 0.5, None).is_err());
    }
}
