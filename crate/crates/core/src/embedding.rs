//! Rotation systems and face tracing.
//!
//! The face to the left of the dart `(u, v)` continues with
//! `(v, w)` where `w` follows `u` in the rotation at `v`.

use rand::Rng;
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EmbedError {
    #[error("rotation has {got} vertices, graph has {n}")]
    WrongLength { got: usize, n: usize },
    #[error("rotation at vertex {0} is not a permutation of its neighbours")]
    NotPermutation(usize),
    #[error("embedded graph must be connected")]
    Disconnected,
    #[error("edge ({0}, {1}) is not in the graph")]
    NoSuchEdge(usize, usize),
}

/// A face as a closed walk: dart `i` is `(walk[i], walk[i + 1])`, cyclically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub walk: Vec<usize>,
}

impl Face {
    pub fn degree(&self) -> usize {
        self.walk.len()
    }

    pub fn darts(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let k = self.walk.len();
        (0..k).map(move |i| (self.walk[i], self.walk[(i + 1) % k]))
    }

    /// Whether the boundary walk visits no vertex twice.
    pub fn is_cycle(&self) -> bool {
        let mut seen = self.walk.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len() == self.walk.len() && self.walk.len() >= 3
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddedGraph {
    graph: Graph,
    rotation: Vec<Vec<usize>>,
    faces: Vec<Face>,
    /// `dart_face[v][i]` is the face left of `(v, rotation[v][i])`.
    dart_face: Vec<Vec<usize>>,
}

impl EmbeddedGraph {
    pub fn new(graph: Graph, rotation: Vec<Vec<usize>>) -> Result<Self, EmbedError> {
        let n = graph.n();
        if rotation.len() != n {
            return Err(EmbedError::WrongLength {
                got: rotation.len(),
                n,
            });
        }
        for (v, rot) in rotation.iter().enumerate() {
            let mut sorted = rot.clone();
            sorted.sort_unstable();
            if sorted != graph.neighbors(v) {
                return Err(EmbedError::NotPermutation(v));
            }
        }
        if n == 0 || !graph.is_connected() {
            return Err(EmbedError::Disconnected);
        }
        let (faces, dart_face) = trace_faces(&rotation);
        Ok(EmbeddedGraph {
            graph,
            rotation,
            faces,
            dart_face,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn rotation(&self) -> &[Vec<usize>] {
        &self.rotation
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, i: usize) -> &Face {
        &self.faces[i]
    }

    /// Face on the left of the dart `(u, v)`.
    pub fn face_of_dart(&self, u: usize, v: usize) -> Option<usize> {
        let i = self.rotation.get(u)?.iter().position(|&w| w == v)?;
        Some(self.dart_face[u][i])
    }

    /// The face across the edge of dart `(u, v)`, i.e. left of `(v, u)`.
    pub fn face_across(&self, u: usize, v: usize) -> Option<usize> {
        self.face_of_dart(v, u)
    }

    /// V − E + F.
    pub fn euler_characteristic(&self) -> i64 {
        self.graph.n() as i64 - self.graph.edge_count() as i64 + self.faces.len() as i64
    }

    /// Whether every face boundary is a cycle.
    pub fn faces_are_cycles(&self) -> bool {
        self.faces.iter().all(Face::is_cycle)
    }

    /// Copy with the edge `uv` removed. Fails if it disconnects the graph.
    pub fn remove_edge(&self, u: usize, v: usize) -> Result<Self, EmbedError> {
        if !self.graph.has_edge(u, v) {
            return Err(EmbedError::NoSuchEdge(u, v));
        }
        let edges: Vec<(usize, usize)> = self
            .graph
            .edges()
            .into_iter()
            .filter(|&e| e != (u.min(v), u.max(v)))
            .collect();
        let graph = Graph::new(self.graph.n(), &edges).expect("subgraph of a simple graph");
        let mut rotation = self.rotation.clone();
        rotation[u].retain(|&w| w != v);
        rotation[v].retain(|&w| w != u);
        EmbeddedGraph::new(graph, rotation)
    }

    /// C_m □ C_n on the torus; vertex `(a, b)` is `a * n + b` and its
    /// rotation is row-next, column-next, row-previous, column-previous.
    pub fn torus_grid(m: usize, n: usize) -> Result<Self, EmbedError> {
        let graph = Graph::cycle(m).cartesian_product(&Graph::cycle(n));
        let id = |a: usize, b: usize| a * n + b;
        let rotation = (0..m * n)
            .map(|v| {
                let (a, b) = (v / n, v % n);
                vec![
                    id(a, (b + 1) % n),
                    id((a + 1) % m, b),
                    id(a, (b + n - 1) % n),
                    id((a + m - 1) % m, b),
                ]
            })
            .collect();
        EmbeddedGraph::new(graph, rotation)
    }

    /// Straight-line embedding of a convex polyhedron's skeleton: the
    /// neighbours of each vertex are ordered by angle around the outward
    /// direction from the centroid.
    pub fn from_convex_positions(graph: Graph, points: &[[f64; 3]]) -> Result<Self, EmbedError> {
        let n = graph.n();
        if points.len() != n {
            return Err(EmbedError::WrongLength {
                got: points.len(),
                n,
            });
        }
        let mut centroid = [0.0; 3];
        for p in points {
            for k in 0..3 {
                centroid[k] += p[k] / n as f64;
            }
        }
        let sub = |a: [f64; 3], b: [f64; 3]| [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
        let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        let cross = |a: [f64; 3], b: [f64; 3]| {
            [
                a[1] * b[2] - a[2] * b[1],
                a[2] * b[0] - a[0] * b[2],
                a[0] * b[1] - a[1] * b[0],
            ]
        };
        let rotation = (0..n)
            .map(|v| {
                let normal = sub(points[v], centroid);
                let nbrs = graph.neighbors(v);
                let Some(&first) = nbrs.first() else {
                    return Vec::new();
                };
                let tangent = |w: usize| {
                    let d = sub(points[w], points[v]);
                    let s = dot(d, normal) / dot(normal, normal);
                    [
                        d[0] - s * normal[0],
                        d[1] - s * normal[1],
                        d[2] - s * normal[2],
                    ]
                };
                let e1 = tangent(first);
                let e2 = cross(normal, e1);
                let mut order: Vec<(f64, usize)> = nbrs
                    .iter()
                    .map(|&w| {
                        let t = tangent(w);
                        (dot(t, e2).atan2(dot(t, e1)), w)
                    })
                    .collect();
                order.sort_by(|a, b| a.0.total_cmp(&b.0));
                order.into_iter().map(|(_, w)| w).collect()
            })
            .collect();
        EmbeddedGraph::new(graph, rotation)
    }

    pub fn tetrahedron() -> Self {
        let pts = [
            [1.0, 1.0, 1.0],
            [1.0, -1.0, -1.0],
            [-1.0, 1.0, -1.0],
            [-1.0, -1.0, 1.0],
        ];
        Self::from_convex_positions(Graph::complete(4), &pts).expect("tetrahedron")
    }

    pub fn octahedron() -> Self {
        let pts = [
            [1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, -1.0, 0.0],
            [0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0],
        ];
        Self::from_convex_positions(polyhedron_graph(&pts, 2.0), &pts).expect("octahedron")
    }

    pub fn icosahedron() -> Self {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let mut pts = Vec::new();
        for s in [1.0, -1.0] {
            for t in [phi, -phi] {
                pts.push([0.0, s, t]);
                pts.push([s, t, 0.0]);
                pts.push([t, 0.0, s]);
            }
        }
        Self::from_convex_positions(polyhedron_graph(&pts, 4.0), &pts).expect("icosahedron")
    }

    /// The plane embedding of a cycle: two faces of length `n`.
    pub fn plane_cycle(n: usize) -> Self {
        let rotation = (0..n).map(|v| vec![(v + n - 1) % n, (v + 1) % n]).collect();
        EmbeddedGraph::new(Graph::cycle(n), rotation).expect("cycle")
    }

    /// Random plane triangulation on `n ≥ 3` vertices, built by repeatedly
    /// placing a new vertex inside a uniformly chosen face.
    pub fn stacked_triangulation<R: Rng>(n: usize, rng: &mut R) -> Self {
        assert!(n >= 3, "need at least a triangle");
        let mut rotation: Vec<Vec<usize>> = vec![vec![1, 2], vec![2, 0], vec![0, 1]];
        let mut faces: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 2, 1]];
        for x in 3..n {
            let k = rng.gen_range(0..faces.len());
            let [a, b, c] = faces.swap_remove(k);
            // face a -> b -> c: at each corner, x goes right after the
            // predecessor on the walk
            for (corner, pred) in [(b, a), (c, b), (a, c)] {
                let pos = rotation[corner]
                    .iter()
                    .position(|&w| w == pred)
                    .expect("walk edge");
                rotation[corner].insert(pos + 1, x);
            }
            rotation.push(vec![a, c, b]);
            faces.extend([[a, b, x], [b, c, x], [c, a, x]]);
        }
        let mut edges = Vec::new();
        for (v, rot) in rotation.iter().enumerate() {
            edges.extend(rot.iter().filter(|&&w| v < w).map(|&w| (v, w)));
        }
        let graph = Graph::new(n, &edges).expect("triangulation is simple");
        EmbeddedGraph::new(graph, rotation).expect("consistent rotation")
    }

    /// Random plane graph: a stacked triangulation with up to `deletions`
    /// edges removed, skipping deletions that would disconnect it.
    pub fn random_plane_graph<R: Rng>(n: usize, deletions: usize, rng: &mut R) -> Self {
        let mut e = Self::stacked_triangulation(n, rng);
        for _ in 0..deletions {
            let edges = e.graph.edges();
            let (u, v) = edges[rng.gen_range(0..edges.len())];
            if let Ok(next) = e.remove_edge(u, v) {
                e = next;
            }
        }
        e
    }
}

fn polyhedron_graph(points: &[[f64; 3]], edge_sq: f64) -> Graph {
    let mut edges = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d: f64 = (0..3).map(|k| (points[i][k] - points[j][k]).powi(2)).sum();
            if (d - edge_sq).abs() < 1e-9 {
                edges.push((i, j));
            }
        }
    }
    Graph::new(points.len(), &edges).expect("polyhedron skeleton")
}

/// Traces every face of a rotation system. An isolated vertex (only
/// possible for K1) bounds a single face with an empty walk.
pub fn trace_faces(rotation: &[Vec<usize>]) -> (Vec<Face>, Vec<Vec<usize>>) {
    const UNSEEN: usize = usize::MAX;
    let mut dart_face: Vec<Vec<usize>> = rotation.iter().map(|r| vec![UNSEEN; r.len()]).collect();
    let mut faces = Vec::new();
    for u in 0..rotation.len() {
        for i in 0..rotation[u].len() {
            if dart_face[u][i] != UNSEEN {
                continue;
            }
            let id = faces.len();
            let mut walk = Vec::new();
            let (mut a, mut ai) = (u, i);
            while dart_face[a][ai] == UNSEEN {
                dart_face[a][ai] = id;
                walk.push(a);
                let b = rotation[a][ai];
                let back = rotation[b]
                    .iter()
                    .position(|&w| w == a)
                    .expect("symmetric rotation");
                let bi = (back + 1) % rotation[b].len();
                (a, ai) = (b, bi);
            }
            faces.push(Face { walk });
        }
    }
    if faces.is_empty() && !rotation.is_empty() {
        faces.push(Face { walk: Vec::new() });
    }
    (faces, dart_face)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn degree_sum(e: &EmbeddedGraph) -> usize {
        e.faces().iter().map(Face::degree).sum()
    }

    #[test]
    fn tetrahedron_faces() {
        let e = EmbeddedGraph::tetrahedron();
        assert_eq!(e.faces().len(), 4);
        assert!(e.faces().iter().all(|f| f.degree() == 3));
        assert_eq!(e.euler_characteristic(), 2);
        // any rotation of K4 is valid, though not necessarily planar
        let rot = (0..4)
            .map(|v| (0..4).filter(|&w| w != v).collect())
            .collect();
        let other = EmbeddedGraph::new(Graph::complete(4), rot).unwrap();
        assert_eq!(degree_sum(&other), 12);
    }

    #[test]
    fn torus_grid_faces() {
        let e = EmbeddedGraph::torus_grid(3, 3).unwrap();
        assert_eq!(e.faces().len(), 9);
        assert!(e.faces().iter().all(|f| f.degree() == 4 && f.is_cycle()));
        assert_eq!(e.euler_characteristic(), 0);
        let e = EmbeddedGraph::torus_grid(4, 5).unwrap();
        assert_eq!(e.euler_characteristic(), 0);
    }

    #[test]
    fn small_cases() {
        let k2 = EmbeddedGraph::new(Graph::path(2), vec![vec![1], vec![0]]).unwrap();
        assert_eq!(k2.faces().len(), 1);
        assert_eq!(k2.face(0).degree(), 2);
        assert_eq!(k2.euler_characteristic(), 2);
        let k1 = EmbeddedGraph::new(Graph::empty(1), vec![vec![]]).unwrap();
        assert_eq!(k1.faces().len(), 1);
        assert_eq!(k1.euler_characteristic(), 2);
        let c5 = EmbeddedGraph::plane_cycle(5);
        assert_eq!(
            c5.faces().iter().map(Face::degree).collect::<Vec<_>>(),
            vec![5, 5]
        );
        assert_eq!(c5.euler_characteristic(), 2);
    }

    #[test]
    fn bad_rotations() {
        let g = Graph::complete(4);
        let mut rot: Vec<Vec<usize>> = (0..4)
            .map(|v| (0..4).filter(|&w| w != v).collect())
            .collect();
        rot[0] = vec![1, 2, 2];
        assert_eq!(
            EmbeddedGraph::new(g.clone(), rot.clone()),
            Err(EmbedError::NotPermutation(0))
        );
        rot.pop();
        assert!(matches!(
            EmbeddedGraph::new(g, rot),
            Err(EmbedError::WrongLength { .. })
        ));
        let two = Graph::empty(2);
        assert_eq!(
            EmbeddedGraph::new(two, vec![vec![], vec![]]),
            Err(EmbedError::Disconnected)
        );
    }

    #[test]
    fn polyhedra() {
        let o = EmbeddedGraph::octahedron();
        assert_eq!(
            (o.graph().n(), o.graph().edge_count(), o.faces().len()),
            (6, 12, 8)
        );
        let i = EmbeddedGraph::icosahedron();
        assert_eq!(
            (i.graph().n(), i.graph().edge_count(), i.faces().len()),
            (12, 30, 20)
        );
        assert!(i.faces().iter().all(|f| f.degree() == 3));
    }

    #[test]
    fn random_plane_graphs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let n = rng.gen_range(3..14);
            let del = rng.gen_range(0..2 * n);
            let e = EmbeddedGraph::random_plane_graph(n, del, &mut rng);
            assert_eq!(e.euler_characteristic(), 2);
            assert_eq!(degree_sum(&e), 2 * e.graph().edge_count());
            assert!(e.graph().is_planar());
            for f in 0..e.faces().len() {
                for (u, v) in e.face(f).darts() {
                    assert_eq!(e.face_of_dart(u, v), Some(f));
                }
            }
        }
    }
}
