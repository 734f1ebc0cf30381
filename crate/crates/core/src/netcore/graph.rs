use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};

/// Whether a network must form a single component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Connectivity {
    #[default]
    Required,
    /// Accept several components (segregated scenarios).
    Relaxed,
}

/// Undirected simple graph over individuals `0..n`.
///
/// Adjacency lists are kept sorted so every derived quantity iterates
/// neighbours in ascending index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    adj: Vec<Vec<usize>>,
    edge_count: usize,
    connectivity: Connectivity,
}

impl Network {
    /// Builds a network from an unordered edge list.
    ///
    /// `(i, j)` and `(j, i)` denote the same edge and duplicates collapse.
    /// Self-loops and out-of-range endpoints are rejected, as is a
    /// disconnected graph unless `connectivity` is relaxed.
    pub fn new(n: usize, edges: &[(usize, usize)], connectivity: Connectivity) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("network must have at least one individual".into()));
        }
        let mut set = BTreeSet::new();
        for (k, &(i, j)) in edges.iter().enumerate() {
            for node in [i, j] {
                if node >= n {
                    return Err(Error::EdgeOutOfRange { edge_index: k, node, n });
                }
            }
            if i == j {
                return Err(Error::SelfLoop { edge_index: k, node: i });
            }
            set.insert((i.min(j), i.max(j)));
        }
        let mut adj = vec![Vec::new(); n];
        for &(i, j) in &set {
            adj[i].push(j);
            adj[j].push(i);
        }
        for row in &mut adj {
            row.sort_unstable();
        }
        let net = Network { adj, edge_count: set.len(), connectivity };
        if connectivity == Connectivity::Required {
            let components = net.component_count();
            if components > 1 {
                return Err(Error::Disconnected { components });
            }
        }
        Ok(net)
    }

    /// Builds a network from a 0/1 adjacency matrix.
    ///
    /// Unlike the edge-list form, a matrix can encode asymmetric links and
    /// a non-zero diagonal; both are rejected rather than repaired.
    pub fn from_adjacency(rows: &[Vec<u8>], connectivity: Connectivity) -> Result<Self> {
        let n = rows.len();
        let mut edges = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidParameter(format!(
                    "adjacency row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
            for (j, &g) in row.iter().enumerate() {
                if g > 1 {
                    return Err(Error::InvalidParameter(format!("adjacency entry ({i}, {j}) = {g} is not 0/1")));
                }
                if g != rows[j][i] {
                    return Err(Error::Asymmetric { i, j });
                }
                if g == 1 {
                    if i == j {
                        return Err(Error::SelfLoop { edge_index: i, node: i });
                    }
                    if i < j {
                        edges.push((i, j));
                    }
                }
            }
        }
        Network::new(n, &edges, connectivity)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn connectivity(&self) -> Connectivity {
        self.connectivity
    }

    /// Number of neighbours of `i`.
    pub fn degree(&self, i: usize) -> Result<usize> {
        self.check_index(i)?;
        Ok(self.adj[i].len())
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    /// Sorted neighbour list. Panics if `i >= n`.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i < self.n() && self.adj[i].binary_search(&j).is_ok()
    }

    /// Edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Component label for each node; labels are assigned in order of the
    /// smallest node index in each component.
    pub fn components(&self) -> Vec<usize> {
        let n = self.n();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if label[v] == usize::MAX {
                        label[v] = next;
                        queue.push_back(v);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn component_count(&self) -> usize {
        self.components().into_iter().max().map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.n() {
            Err(Error::IndexOutOfRange { index: i, n: self.n() })
        } else {
            Ok(())
        }
    }
}
