use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

/// Physical qubit connectivity: undirected edges over `0..n_physical`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CouplingMap {
    n_physical: usize,
    edges: BTreeSet<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl CouplingMap {
    /// `n_physical` is raised to cover every edge endpoint.
    pub fn new(n_physical: usize, edges: &[(usize, usize)]) -> Result<CouplingMap, String> {
        let mut set = BTreeSet::new();
        let mut n = n_physical;
        for &(u, v) in edges {
            if u == v {
                return Err(format!("self-loop on qubit {u}"));
            }
            set.insert((u.min(v), u.max(v)));
            n = n.max(u.max(v) + 1);
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &set {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for a in &mut adjacency {
            a.sort_unstable();
        }
        Ok(CouplingMap {
            n_physical: n,
            edges: set,
            adjacency,
        })
    }

    pub fn n_physical(&self) -> usize {
        self.n_physical
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// Shortest path from `from` to `to`, inclusive. Neighbours are visited
    /// in ascending order, so ties resolve toward smaller indices.
    pub fn shortest_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        if from >= self.n_physical || to >= self.n_physical {
            return None;
        }
        let mut parent = vec![usize::MAX; self.n_physical];
        parent[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            if u == to {
                let mut path = vec![to];
                let mut cur = to;
                while cur != from {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for &v in &self.adjacency[u] {
                if parent[v] == usize::MAX {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        None
    }
}

/// `u-v,u-v,...`
impl FromStr for CouplingMap {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut edges = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            let (u, v) = part
                .split_once('-')
                .ok_or_else(|| format!("invalid cmap edge '{part}', expected <u>-<v>"))?;
            let parse = |x: &str| {
                x.trim().parse::<usize>().map_err(|_| {
                    format!("invalid qubit index '{}' in cmap edge '{part}'", x.trim())
                })
            };
            edges.push((parse(u)?, parse(v)?));
        }
        CouplingMap::new(0, &edges)
    }
}

impl fmt::Display for CouplingMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.edges.iter().map(|(u, v)| format!("{u}-{v}")).collect();
        f.write_str(&parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_canonically() {
        let c: CouplingMap = "2-1, 0-1".parse().unwrap();
        assert_eq!(c.to_string(), "0-1,1-2");
        assert_eq!(c.n_physical(), 3);
        assert_eq!(c.to_string().parse::<CouplingMap>().unwrap(), c);
    }

    #[test]
    fn rejects_garbage() {
        assert!("0-0".parse::<CouplingMap>().is_err());
        assert!("0:1".parse::<CouplingMap>().is_err());
        assert!("a-1".parse::<CouplingMap>().is_err());
        assert!("".parse::<CouplingMap>().is_err());
    }

    #[test]
    fn bfs_prefers_smaller_indices() {
        // square 0-1-3, 0-2-3: both routes are length 2
        let c: CouplingMap = "0-1,0-2,1-3,2-3".parse().unwrap();
        assert_eq!(c.shortest_path(0, 3), Some(vec![0, 1, 3]));
        assert_eq!(c.shortest_path(3, 0), Some(vec![3, 1, 0]));
    }

    #[test]
    fn disconnected_has_no_path() {
        let c: CouplingMap = "0-1,2-3".parse().unwrap();
        assert_eq!(c.shortest_path(0, 3), None);
    }
}
