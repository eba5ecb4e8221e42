//! Three-level physical architecture: IP-over-WDM core nodes, one metro
//! network per core node, and PON access groups homed at core nodes.
//!
//! Lightpaths follow the bypass approach: traffic between two core routers
//! rides a single lightpath end to end, so the physical route of that
//! lightpath (and nothing else) determines amplifier and regenerator counts.

use alloc::collections::BinaryHeap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::num;

/// Dense index of a core node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

/// Dense index of an access group (node-major order).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupId(pub usize);

/// Index into [`CoreTopology::links`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinkId(pub usize);

impl core::fmt::Display for NodeId {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "n{}", self.0)
    }
}

impl core::fmt::Display for GroupId {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "g{}", self.0)
    }
}

/// Bidirectional fibre link between two core nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Link {
    pub a: NodeId,
    pub b: NodeId,
    pub distance_km: f64,
    pub fibre_count: u32,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TopologyError {
    #[error("topology has no nodes")]
    Empty,
    #[error("link {a}-{b} is a self-loop")]
    SelfLoop { a: String, b: String },
    #[error("link {a}-{b} has non-positive distance {km} km")]
    NonPositiveDistance { a: String, b: String, km: f64 },
    #[error("link {a}-{b} has zero fibres")]
    ZeroFibres { a: String, b: String },
    #[error("duplicate link {a}-{b}")]
    DuplicateLink { a: String, b: String },
    #[error("graph is disconnected: node {node} unreachable from {root}")]
    Disconnected { node: String, root: String },
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("unknown access group {0}")]
    UnknownGroup(String),
    #[error("no route from {src} to {dst}")]
    Unreachable { src: String, dst: String },
}

/// Validated core topology. Immutable after construction; freely shared
/// across concurrent scenario evaluations.
#[derive(Debug, Clone)]
pub struct CoreTopology {
    labels: Vec<String>,
    links: Vec<Link>,
    /// adjacency[n] = (neighbour, link), sorted by neighbour id.
    adjacency: Vec<Vec<(NodeId, LinkId)>>,
    /// groups_home[g] = core node the access group is homed at.
    groups_home: Vec<NodeId>,
    /// group_range[n] = groups homed at node n, as a range into group ids.
    group_start: Vec<usize>,
}

impl CoreTopology {
    /// Builds and validates a topology. `access_groups_per_node[n]` gives the
    /// number of access groups homed at node `n`; group ids are assigned
    /// node-major (all of node 0's groups first).
    pub fn new(
        labels: Vec<String>,
        links: Vec<Link>,
        access_groups_per_node: Vec<u32>,
    ) -> Result<Self, TopologyError> {
        let n = labels.len();
        if n == 0 {
            return Err(TopologyError::Empty);
        }
        assert_eq!(access_groups_per_node.len(), n, "one group count per node");

        let name = |id: NodeId| -> String {
            labels
                .get(id.0)
                .cloned()
                .unwrap_or_else(|| id.to_string())
        };

        let mut seen = vec![false; n * n];
        for link in &links {
            if link.a.0 >= n {
                return Err(TopologyError::UnknownNode(name(link.a)));
            }
            if link.b.0 >= n {
                return Err(TopologyError::UnknownNode(name(link.b)));
            }
            if link.a == link.b {
                return Err(TopologyError::SelfLoop {
                    a: name(link.a),
                    b: name(link.b),
                });
            }
            if link.distance_km <= 0.0 {
                return Err(TopologyError::NonPositiveDistance {
                    a: name(link.a),
                    b: name(link.b),
                    km: link.distance_km,
                });
            }
            if link.fibre_count == 0 {
                return Err(TopologyError::ZeroFibres {
                    a: name(link.a),
                    b: name(link.b),
                });
            }
            let (lo, hi) = (link.a.0.min(link.b.0), link.a.0.max(link.b.0));
            if seen[lo * n + hi] {
                return Err(TopologyError::DuplicateLink {
                    a: name(link.a),
                    b: name(link.b),
                });
            }
            seen[lo * n + hi] = true;
        }

        let mut adjacency: Vec<Vec<(NodeId, LinkId)>> = vec![Vec::new(); n];
        for (i, link) in links.iter().enumerate() {
            adjacency[link.a.0].push((link.b, LinkId(i)));
            adjacency[link.b.0].push((link.a, LinkId(i)));
        }
        for adj in &mut adjacency {
            adj.sort_by_key(|(node, _)| *node);
        }

        // Connectivity check (BFS from node 0).
        if n > 1 {
            let mut visited = vec![false; n];
            let mut queue = vec![0usize];
            visited[0] = true;
            while let Some(u) = queue.pop() {
                for &(v, _) in &adjacency[u] {
                    if !visited[v.0] {
                        visited[v.0] = true;
                        queue.push(v.0);
                    }
                }
            }
            if let Some(node) = visited.iter().position(|v| !v) {
                return Err(TopologyError::Disconnected {
                    node: name(NodeId(node)),
                    root: name(NodeId(0)),
                });
            }
        }

        let mut groups_home = Vec::new();
        let mut group_start = Vec::with_capacity(n + 1);
        group_start.push(0);
        for (node, &count) in access_groups_per_node.iter().enumerate() {
            for _ in 0..count {
                groups_home.push(NodeId(node));
            }
            group_start.push(groups_home.len());
        }

        Ok(Self {
            labels,
            links,
            adjacency,
            groups_home,
            group_start,
        })
    }

    /// Convenience constructor for tests: nodes named "0".."n-1", one access
    /// group per node, links as `(a, b, km)` with a single fibre each.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self, TopologyError> {
        let labels = (0..n).map(|i| i.to_string()).collect();
        let links = edges
            .iter()
            .map(|&(a, b, km)| Link {
                a: NodeId(a),
                b: NodeId(b),
                distance_km: km,
                fibre_count: 1,
            })
            .collect();
        Self::new(labels, links, vec![1; n])
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn group_count(&self) -> usize {
        self.groups_home.len()
    }

    pub fn node_label(&self, node: NodeId) -> &str {
        &self.labels[node.0]
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.node_count()).map(NodeId)
    }

    pub fn groups(&self) -> impl Iterator<Item = GroupId> {
        (0..self.group_count()).map(GroupId)
    }

    pub fn contains_node(&self, node: NodeId) -> bool {
        node.0 < self.node_count()
    }

    pub fn contains_group(&self, group: GroupId) -> bool {
        group.0 < self.group_count()
    }

    /// Core node the access group is homed at.
    pub fn home_of(&self, group: GroupId) -> NodeId {
        self.groups_home[group.0]
    }

    /// Access groups homed at `node`.
    pub fn groups_at(&self, node: NodeId) -> impl Iterator<Item = GroupId> {
        (self.group_start[node.0]..self.group_start[node.0 + 1]).map(GroupId)
    }

    /// Minimum-km distances from `src` to every node (Dijkstra).
    pub fn distances_from(&self, src: NodeId) -> Vec<f64> {
        let mut dist = vec![f64::INFINITY; self.node_count()];
        dist[src.0] = 0.0;
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((OrdF64(0.0), src)));
        while let Some(Reverse((OrdF64(d), u))) = heap.pop() {
            if d > dist[u.0] {
                continue;
            }
            for &(v, link) in &self.adjacency[u.0] {
                let nd = d + self.links[link.0].distance_km;
                if nd < dist[v.0] {
                    dist[v.0] = nd;
                    heap.push(Reverse((OrdF64(nd), v)));
                }
            }
        }
        dist
    }

    /// Nodes ranked by closeness (smallest sum of shortest-path km to all
    /// other nodes first); ties broken by node id.
    pub fn nodes_by_closeness(&self) -> Vec<NodeId> {
        let mut scored: Vec<(f64, NodeId)> = self
            .nodes()
            .map(|n| (self.distances_from(n).iter().sum::<f64>(), n))
            .collect();
        scored.sort_by(|(da, na), (db, nb)| {
            da.partial_cmp(db)
                .unwrap_or(core::cmp::Ordering::Equal)
                .then(na.cmp(nb))
        });
        scored.into_iter().map(|(_, n)| n).collect()
    }
}

/// Total-order wrapper for finite, non-negative distances.
#[derive(PartialEq, PartialOrd)]
struct OrdF64(f64);

impl Eq for OrdF64 {}

impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.partial_cmp(other).unwrap_or(core::cmp::Ordering::Equal)
    }
}

/// Physical route of a bypass lightpath.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalPath {
    /// Visited nodes, starting at the source. A path at a single node (src ==
    /// dst) has one entry and no hops.
    pub nodes: Vec<NodeId>,
    /// Links traversed, in order.
    pub hop_links: Vec<LinkId>,
    pub total_km: f64,
}

impl PhysicalPath {
    pub fn hops(&self) -> usize {
        self.hop_links.len()
    }
}

/// Minimum-km route from `src` to `dst`. Among equal-km routes the
/// lexicographically smallest node sequence is returned, so repeated calls
/// are byte-for-byte reproducible.
pub fn shortest_physical_path(
    topo: &CoreTopology,
    src: NodeId,
    dst: NodeId,
) -> Result<PhysicalPath, TopologyError> {
    let name = |id: NodeId| topo.labels.get(id.0).cloned().unwrap_or_else(|| id.to_string());
    if !topo.contains_node(src) {
        return Err(TopologyError::UnknownNode(name(src)));
    }
    if !topo.contains_node(dst) {
        return Err(TopologyError::UnknownNode(name(dst)));
    }
    if src == dst {
        return Ok(PhysicalPath {
            nodes: vec![src],
            hop_links: Vec::new(),
            total_km: 0.0,
        });
    }

    // Distance-to-destination labels, then a greedy forward walk that always
    // picks the smallest next node still on some shortest path. Prefix-greedy
    // selection yields the lexicographically smallest optimal sequence.
    let to_dst = topo.distances_from(dst);
    if to_dst[src.0].is_infinite() {
        return Err(TopologyError::Unreachable {
            src: name(src),
            dst: name(dst),
        });
    }

    let mut nodes = vec![src];
    let mut hop_links = Vec::new();
    let mut total_km = 0.0;
    let mut current = src;
    while current != dst {
        let mut next: Option<(NodeId, LinkId)> = None;
        for &(v, link) in &topo.adjacency[current.0] {
            let via = topo.links[link.0].distance_km + to_dst[v.0];
            if num::close(via, to_dst[current.0], num::REL_TOL) {
                match next {
                    Some((best, _)) if best <= v => {}
                    _ => next = Some((v, link)),
                }
            }
        }
        let (v, link) = next.ok_or_else(|| TopologyError::Unreachable {
            src: name(src),
            dst: name(dst),
        })?;
        total_km += topo.links[link.0].distance_km;
        nodes.push(v);
        hop_links.push(link);
        current = v;
    }

    Ok(PhysicalPath {
        nodes,
        hop_links,
        total_km,
    })
}

/// Which core nodes host CDCs and MFDCs, and which access groups own an AFDC.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SitePlacement {
    /// Sorted, deduplicated. Index into this vector is the "CDC index" used
    /// by plans.
    pub cdc_nodes: Vec<NodeId>,
    pub mfdc_nodes: Vec<NodeId>,
    pub afdc_groups: Vec<GroupId>,
}

impl SitePlacement {
    pub fn new(
        mut cdc_nodes: Vec<NodeId>,
        mut mfdc_nodes: Vec<NodeId>,
        mut afdc_groups: Vec<GroupId>,
    ) -> Self {
        cdc_nodes.sort();
        cdc_nodes.dedup();
        mfdc_nodes.sort();
        mfdc_nodes.dedup();
        afdc_groups.sort();
        afdc_groups.dedup();
        Self {
            cdc_nodes,
            mfdc_nodes,
            afdc_groups,
        }
    }

    /// Default placement: CDCs at the `cdc_count` highest-closeness nodes, no
    /// MFDCs, an AFDC at every access group. The CDC choice is a documented
    /// default, not a measured fact.
    pub fn default_for(topo: &CoreTopology, cdc_count: usize) -> Self {
        let cdc: Vec<NodeId> = topo
            .nodes_by_closeness()
            .into_iter()
            .take(cdc_count)
            .collect();
        Self::new(cdc, Vec::new(), topo.groups().collect())
    }

    pub fn validate(&self, topo: &CoreTopology) -> Result<(), TopologyError> {
        for &n in self.cdc_nodes.iter().chain(&self.mfdc_nodes) {
            if !topo.contains_node(n) {
                return Err(TopologyError::UnknownNode(n.to_string()));
            }
        }
        for &g in &self.afdc_groups {
            if !topo.contains_group(g) {
                return Err(TopologyError::UnknownGroup(g.to_string()));
            }
        }
        Ok(())
    }

    pub fn has_afdc(&self, group: GroupId) -> bool {
        self.afdc_groups.binary_search(&group).is_ok()
    }

    pub fn has_mfdc(&self, node: NodeId) -> bool {
        self.mfdc_nodes.binary_search(&node).is_ok()
    }

    pub fn cdc_index(&self, node: NodeId) -> Option<usize> {
        self.cdc_nodes.binary_search(&node).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_graph() -> CoreTopology {
        // A - B (100 km) - C (200 km)
        CoreTopology::from_edges(3, &[(0, 1, 100.0), (1, 2, 200.0)]).unwrap()
    }

    #[test]
    fn src_equals_dst_gives_zero_km() {
        let topo = line_graph();
        let p = shortest_physical_path(&topo, NodeId(1), NodeId(1)).unwrap();
        assert_eq!(p.hops(), 0);
        assert_eq!(p.total_km, 0.0);
    }

    #[test]
    fn line_graph_unique_path() {
        let topo = line_graph();
        let p = shortest_physical_path(&topo, NodeId(0), NodeId(2)).unwrap();
        assert_eq!(p.nodes, vec![NodeId(0), NodeId(1), NodeId(2)]);
        assert_eq!(p.total_km, 300.0);
    }

    #[test]
    fn triangle_prefers_two_hop_route() {
        // A-B 100, B-C 100, A-C 250: enumerating the two simple A->C paths
        // gives 250 (direct) vs 200 (via B); minimum is via B.
        let topo =
            CoreTopology::from_edges(3, &[(0, 1, 100.0), (1, 2, 100.0), (0, 2, 250.0)]).unwrap();
        let p = shortest_physical_path(&topo, NodeId(0), NodeId(2)).unwrap();
        assert_eq!(p.nodes, vec![NodeId(0), NodeId(1), NodeId(2)]);
        assert_eq!(p.total_km, 200.0);
    }

    #[test]
    fn tie_break_is_lexicographic_and_stable() {
        // Two equal-cost routes 0->3: [0,1,3] and [0,2,3]; expect [0,1,3].
        let topo = CoreTopology::from_edges(
            4,
            &[(0, 1, 100.0), (1, 3, 100.0), (0, 2, 100.0), (2, 3, 100.0)],
        )
        .unwrap();
        for _ in 0..5 {
            let p = shortest_physical_path(&topo, NodeId(0), NodeId(3)).unwrap();
            assert_eq!(p.nodes, vec![NodeId(0), NodeId(1), NodeId(3)]);
        }
    }

    #[test]
    fn path_distance_is_symmetric() {
        let topo = CoreTopology::from_edges(
            5,
            &[
                (0, 1, 120.0),
                (1, 2, 340.0),
                (2, 3, 75.0),
                (3, 4, 410.0),
                (0, 4, 900.0),
                (1, 3, 500.0),
            ],
        )
        .unwrap();
        for a in 0..5 {
            for b in 0..5 {
                let ab = shortest_physical_path(&topo, NodeId(a), NodeId(b)).unwrap();
                let ba = shortest_physical_path(&topo, NodeId(b), NodeId(a)).unwrap();
                assert!((ab.total_km - ba.total_km).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn triangle_inequality_on_shortest_distances() {
        let topo = CoreTopology::from_edges(
            5,
            &[
                (0, 1, 120.0),
                (1, 2, 340.0),
                (2, 3, 75.0),
                (3, 4, 410.0),
                (0, 4, 900.0),
                (1, 3, 500.0),
            ],
        )
        .unwrap();
        let d: Vec<Vec<f64>> = (0..5).map(|n| topo.distances_from(NodeId(n))).collect();
        for a in 0..5 {
            for b in 0..5 {
                for c in 0..5 {
                    assert!(d[a][c] <= d[a][b] + d[b][c] + 1e-9);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_links() {
        let err = CoreTopology::from_edges(2, &[(0, 1, -5.0)]).unwrap_err();
        assert!(matches!(err, TopologyError::NonPositiveDistance { .. }));

        let err = CoreTopology::from_edges(2, &[(0, 0, 10.0)]).unwrap_err();
        assert!(matches!(err, TopologyError::SelfLoop { .. }));

        let err = CoreTopology::from_edges(2, &[(0, 1, 10.0), (1, 0, 20.0)]).unwrap_err();
        assert!(matches!(err, TopologyError::DuplicateLink { .. }));

        let err = CoreTopology::from_edges(4, &[(0, 1, 10.0), (2, 3, 10.0)]).unwrap_err();
        assert!(matches!(err, TopologyError::Disconnected { .. }));
    }

    #[test]
    fn group_homing_is_node_major() {
        let labels = vec!["a".into(), "b".into()];
        let links = vec![Link {
            a: NodeId(0),
            b: NodeId(1),
            distance_km: 100.0,
            fibre_count: 1,
        }];
        let topo = CoreTopology::new(labels, links, vec![2, 1]).unwrap();
        assert_eq!(topo.group_count(), 3);
        assert_eq!(topo.home_of(GroupId(0)), NodeId(0));
        assert_eq!(topo.home_of(GroupId(1)), NodeId(0));
        assert_eq!(topo.home_of(GroupId(2)), NodeId(1));
        let at0: Vec<GroupId> = topo.groups_at(NodeId(0)).collect();
        assert_eq!(at0, vec![GroupId(0), GroupId(1)]);
    }

    #[test]
    fn default_placement_picks_central_nodes() {
        // Star graph: node 0 is trivially the most central.
        let topo = CoreTopology::from_edges(
            4,
            &[(0, 1, 100.0), (0, 2, 100.0), (0, 3, 100.0)],
        )
        .unwrap();
        let p = SitePlacement::default_for(&topo, 1);
        assert_eq!(p.cdc_nodes, vec![NodeId(0)]);
        assert_eq!(p.afdc_groups.len(), 4);
    }
}
