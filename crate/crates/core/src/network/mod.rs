//! User similarity networks over hashtag-frequency profiles.
//!
//! Each user is a sparse vector of hashtag counts; edges carry the cosine
//! similarity between two users and a band: strong above 0.8, medium above
//! 0.6, weak otherwise (boundary values fall into the lower band). An
//! inverted hashtag index skips the pairs that share no hashtag, whose
//! similarity is exactly zero.

mod export;
mod layout;

pub use export::{export_graph, write_component_report, ExportFormat, ExportOptions};
pub use layout::layout_force_directed;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::corpus::aggregate::UserAggregate;
use crate::error::{Error, Result};
use crate::par;

/// One user's hashtag frequency profile (counts > 0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HashtagVector {
    pub user_id: String,
    pub weights: BTreeMap<String, f64>,
}

impl HashtagVector {
    pub fn from_aggregate(agg: &UserAggregate) -> HashtagVector {
        HashtagVector {
            user_id: agg.user_id.clone(),
            weights: agg
                .hashtag_tally
                .iter()
                .filter(|(_, &c)| c > 0)
                .map(|(h, &c)| (h.clone(), c as f64))
                .collect(),
        }
    }

    pub fn norm(&self) -> f64 {
        self.weights.values().map(|w| w * w).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Cosine similarity of two hashtag profiles, in [0,1] for count vectors.
pub fn cosine(u: &HashtagVector, v: &HashtagVector) -> Result<f64> {
    if u.is_zero() {
        return Err(Error::ZeroVector(u.user_id.clone()));
    }
    if v.is_zero() {
        return Err(Error::ZeroVector(v.user_id.clone()));
    }
    let (small, large) = if u.weights.len() <= v.weights.len() {
        (u, v)
    } else {
        (v, u)
    };
    let mut dot = 0.0;
    for (tag, w) in &small.weights {
        if let Some(x) = large.weights.get(tag) {
            dot += w * x;
        }
    }
    Ok(dot / (u.norm() * v.norm()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Band {
    Weak,
    Medium,
    Strong,
}

impl Band {
    /// Band thresholds read the bounds as exclusive on entry: exactly 0.8
    /// is medium, exactly 0.6 is weak.
    pub fn of(similarity: f64) -> Band {
        if similarity > 0.8 {
            Band::Strong
        } else if similarity > 0.6 {
            Band::Medium
        } else {
            Band::Weak
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Band::Weak => "weak",
            Band::Medium => "medium",
            Band::Strong => "strong",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    /// Indexes into `UserGraph::nodes`, with `a < b`.
    pub a: usize,
    pub b: usize,
    pub similarity: f64,
    pub band: Band,
}

/// Undirected user graph; nodes are sorted user ids, edges deduplicated
/// with no self-loops.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserGraph {
    pub nodes: Vec<String>,
    pub edges: Vec<Edge>,
}

impl UserGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }
}

/// All-pairs similarity graph over the users' hashtag profiles. Pairs with
/// similarity strictly above `min_similarity` become edges; users with no
/// hashtags stay as isolated nodes.
pub fn build_graph(vectors: &[HashtagVector], min_similarity: f64) -> Result<UserGraph> {
    if !(0.0..1.0).contains(&min_similarity) {
        return Err(Error::InvalidConfig(
            "min_similarity must be in [0, 1)".into(),
        ));
    }
    let mut sorted: Vec<&HashtagVector> = vectors.iter().collect();
    sorted.sort_by(|a, b| a.user_id.cmp(&b.user_id));

    // inverted index: hashtag -> indexes of users that used it
    let mut by_hashtag: HashMap<&str, Vec<usize>> = HashMap::new();
    for (i, v) in sorted.iter().enumerate() {
        for tag in v.weights.keys() {
            by_hashtag.entry(tag.as_str()).or_default().push(i);
        }
    }
    let norms: Vec<f64> = sorted.iter().map(|v| v.norm()).collect();

    let per_node: Vec<Vec<Edge>> = par::map_indices(sorted.len(), |i| {
        // accumulate dot products against every later user sharing a tag
        let mut dots: BTreeMap<usize, f64> = BTreeMap::new();
        for (tag, w) in &sorted[i].weights {
            for &j in &by_hashtag[tag.as_str()] {
                if j > i {
                    *dots.entry(j).or_insert(0.0) += w * sorted[j].weights[tag];
                }
            }
        }
        dots.into_iter()
            .filter_map(|(j, dot)| {
                let similarity = dot / (norms[i] * norms[j]);
                (similarity > min_similarity).then(|| Edge {
                    a: i,
                    b: j,
                    similarity,
                    band: Band::of(similarity),
                })
            })
            .collect()
    });

    Ok(UserGraph {
        nodes: sorted.iter().map(|v| v.user_id.clone()).collect(),
        edges: per_node.into_iter().flatten().collect(),
    })
}

/// Connected components over edges at or above a band. Components are
/// numbered by their smallest member user id; returns (assignment indexed
/// like `nodes`, component sizes).
pub fn components(graph: &UserGraph, band_floor: Band) -> (Vec<usize>, Vec<usize>) {
    let n = graph.node_count();
    let mut parent: Vec<usize> = (0..n).collect();

    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        let mut root = x;
        while parent[root] != root {
            root = parent[root];
        }
        let mut cur = x;
        while parent[cur] != root {
            let next = parent[cur];
            parent[cur] = root;
            cur = next;
        }
        root
    }

    for edge in &graph.edges {
        if edge.band >= band_floor {
            let (ra, rb) = (find(&mut parent, edge.a), find(&mut parent, edge.b));
            if ra != rb {
                // union by smaller node index keeps numbering deterministic
                let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
                parent[hi] = lo;
            }
        }
    }

    // nodes are sorted by user id, so root order == smallest-member order
    let mut component_of_root: BTreeMap<usize, usize> = BTreeMap::new();
    let mut assignment = vec![0usize; n];
    for i in 0..n {
        let root = find(&mut parent, i);
        let next = component_of_root.len();
        let id = *component_of_root.entry(root).or_insert(next);
        assignment[i] = id;
    }
    let mut sizes = vec![0usize; component_of_root.len()];
    for &c in &assignment {
        sizes[c] += 1;
    }
    (assignment, sizes)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn vector(user: &str, weights: &[(&str, f64)]) -> HashtagVector {
        HashtagVector {
            user_id: user.to_string(),
            weights: weights
                .iter()
                .map(|(h, w)| (h.to_string(), *w))
                .collect(),
        }
    }

    #[test]
    fn cosine_identical_is_one() {
        let u = vector("u", &[("a", 3.0), ("b", 4.0)]);
        assert!((cosine(&u, &u).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cosine_disjoint_is_zero() {
        let u = vector("u", &[("a", 1.0)]);
        let v = vector("v", &[("b", 2.0)]);
        assert_eq!(cosine(&u, &v).unwrap(), 0.0);
    }

    #[test]
    fn cosine_half_overlap() {
        let u = vector("u", &[("a", 1.0), ("b", 1.0)]);
        let v = vector("v", &[("a", 1.0), ("c", 1.0)]);
        assert!((cosine(&u, &v).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn cosine_zero_vector_errors() {
        let u = vector("u", &[("a", 1.0)]);
        let z = vector("z", &[]);
        assert!(matches!(cosine(&u, &z), Err(Error::ZeroVector(_))));
    }

    #[test]
    fn band_boundaries_fall_down() {
        assert_eq!(Band::of(0.81), Band::Strong);
        assert_eq!(Band::of(0.8), Band::Medium);
        assert_eq!(Band::of(0.7), Band::Medium);
        assert_eq!(Band::of(0.6), Band::Weak);
        assert_eq!(Band::of(0.1), Band::Weak);
    }

    #[test]
    fn identical_users_get_strong_edge() {
        let vs = vec![
            vector("a", &[("x", 2.0), ("y", 1.0)]),
            vector("b", &[("x", 2.0), ("y", 1.0)]),
        ];
        let g = build_graph(&vs, 0.0).unwrap();
        assert_eq!(g.edges.len(), 1);
        assert_eq!(g.edges[0].band, Band::Strong);
        assert!((g.edges[0].similarity - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_profile_users_stay_isolated() {
        let vs = vec![
            vector("a", &[("x", 1.0)]),
            vector("b", &[]),
            vector("c", &[("x", 1.0)]),
        ];
        let g = build_graph(&vs, 0.0).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edges.len(), 1);
    }

    #[test]
    fn graph_matches_brute_force() {
        // deterministic pseudo-random small fixture
        let mut vs = Vec::new();
        let mut state = 12345u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) as usize
        };
        for i in 0..12 {
            let mut weights = Vec::new();
            for _ in 0..(1 + next() % 4) {
                weights.push((format!("h{}", next() % 6), (1 + next() % 9) as f64));
            }
            let pairs: Vec<(&str, f64)> = weights
                .iter()
                .map(|(h, w)| (h.as_str(), *w))
                .collect();
            vs.push(vector(&format!("u{i:02}"), &pairs));
        }
        let g = build_graph(&vs, 0.2).unwrap();

        // brute force over all pairs of the same sorted ordering
        let mut sorted = vs.clone();
        sorted.sort_by(|a, b| a.user_id.cmp(&b.user_id));
        let mut expected = Vec::new();
        for i in 0..sorted.len() {
            for j in i + 1..sorted.len() {
                if sorted[i].is_zero() || sorted[j].is_zero() {
                    continue;
                }
                let s = cosine(&sorted[i], &sorted[j]).unwrap();
                if s > 0.2 {
                    expected.push((i, j, s));
                }
            }
        }
        assert_eq!(g.edges.len(), expected.len());
        for (edge, (i, j, s)) in g.edges.iter().zip(&expected) {
            assert_eq!((edge.a, edge.b), (*i, *j));
            assert!((edge.similarity - s).abs() < 1e-12);
        }
    }

    #[test]
    fn scaling_a_user_changes_nothing() {
        let mut vs = vec![
            vector("a", &[("x", 2.0), ("y", 3.0)]),
            vector("b", &[("x", 1.0), ("y", 2.0)]),
            vector("c", &[("z", 5.0)]),
        ];
        let before = build_graph(&vs, 0.0).unwrap();
        for w in vs[0].weights.values_mut() {
            *w *= 17.0;
        }
        let after = build_graph(&vs, 0.0).unwrap();
        assert_eq!(before.edges.len(), after.edges.len());
        for (e1, e2) in before.edges.iter().zip(&after.edges) {
            assert_eq!(e1.band, e2.band);
            assert!((e1.similarity - e2.similarity).abs() < 1e-9);
        }
    }

    #[test]
    fn components_respect_band_floor() {
        // two strong triangles joined by one weak edge
        let mut g = UserGraph {
            nodes: (0..6).map(|i| format!("u{i}")).collect(),
            edges: Vec::new(),
        };
        let strong = |a: usize, b: usize| Edge {
            a,
            b,
            similarity: 0.95,
            band: Band::Strong,
        };
        for (a, b) in [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)] {
            g.edges.push(strong(a, b));
        }
        g.edges.push(Edge {
            a: 2,
            b: 3,
            similarity: 0.3,
            band: Band::Weak,
        });
        let (at_strong, sizes_strong) = components(&g, Band::Strong);
        assert_eq!(sizes_strong, vec![3, 3]);
        assert_eq!(at_strong[0], at_strong[1]);
        assert_ne!(at_strong[0], at_strong[3]);
        let (_, sizes_weak) = components(&g, Band::Weak);
        assert_eq!(sizes_weak, vec![6]);
    }

    #[test]
    fn edgeless_graph_components() {
        let g = UserGraph {
            nodes: vec!["a".into(), "b".into(), "c".into()],
            edges: Vec::new(),
        };
        let (assignment, sizes) = components(&g, Band::Weak);
        assert_eq!(assignment, vec![0, 1, 2]);
        assert_eq!(sizes, vec![1, 1, 1]);
    }

    #[test]
    fn complete_graph_single_component() {
        let vs: Vec<HashtagVector> = (0..4)
            .map(|i| vector(&format!("u{i}"), &[("same", 1.0)]))
            .collect();
        let g = build_graph(&vs, 0.0).unwrap();
        let (_, sizes) = components(&g, Band::Strong);
        assert_eq!(sizes, vec![4]);
    }

    #[test]
    fn lowering_the_floor_never_splits_components() {
        let vs: Vec<HashtagVector> = vec![
            vector("a", &[("x", 1.0), ("y", 1.0)]),
            vector("b", &[("x", 1.0)]),
            vector("c", &[("y", 1.0), ("z", 2.0)]),
            vector("d", &[("z", 1.0)]),
        ];
        let g = build_graph(&vs, 0.0).unwrap();
        let (_, strong) = components(&g, Band::Strong);
        let (_, medium) = components(&g, Band::Medium);
        let (_, weak) = components(&g, Band::Weak);
        assert!(strong.len() >= medium.len());
        assert!(medium.len() >= weak.len());
    }
}
