//! Planarity by path addition (Demoucron, Malgrange and Pertuiset).
//!
//! A graph is planar iff each of its blocks is. Each 2-connected block is
//! embedded incrementally: start from a cycle, and repeatedly route a path of
//! some not-yet-embedded fragment through a face that contains all of the
//! fragment's attachment vertices. A fragment with no such face certifies
//! non-planarity.

use crate::graph::Graph;

pub fn is_planar(g: &Graph) -> bool {
    let n = g.n();
    if n <= 4 {
        return true;
    }
    if g.edge_count() > 3 * n - 6 {
        return false;
    }
    for comp in g.components() {
        let sub = g.induced_subgraph(&comp).graph;
        let (blocks, _) = sub
            .blocks_and_cut_vertices()
            .expect("component is connected");
        for block in blocks {
            if block.vertices.len() <= 4 {
                continue;
            }
            let local = block_graph(&block.vertices, &block.edges);
            if !block_is_planar(&local) {
                return false;
            }
        }
    }
    true
}

fn block_graph(vertices: &[usize], edges: &[(usize, usize)]) -> Graph {
    let idx = |v: usize| vertices.binary_search(&v).expect("block vertex");
    let local: Vec<_> = edges.iter().map(|&(u, v)| (idx(u), idx(v))).collect();
    Graph::new(vertices.len(), &local).expect("block edges are simple")
}

struct Fragment {
    attachments: Vec<usize>,
    // chord endpoints, or the interior vertices of a component fragment
    chord: Option<(usize, usize)>,
    interior: Vec<usize>,
}

fn block_is_planar(g: &Graph) -> bool {
    let n = g.n();
    let m = g.edge_count();
    if m > 3 * n - 6 {
        return false;
    }
    let mut embedded_v = vec![false; n];
    let mut embedded_e = vec![vec![false; n]; n];
    let mut embedded_count = 0;

    let cycle = initial_cycle(g);
    for i in 0..cycle.len() {
        let (u, v) = (cycle[i], cycle[(i + 1) % cycle.len()]);
        embedded_v[u] = true;
        embedded_e[u][v] = true;
        embedded_e[v][u] = true;
        embedded_count += 1;
    }
    let mut faces: Vec<Vec<usize>> = vec![cycle.clone(), cycle];

    while embedded_count < m {
        let fragments = fragments(g, &embedded_v, &embedded_e);
        let mut choice: Option<(usize, usize)> = None;
        for (i, frag) in fragments.iter().enumerate() {
            let admissible: Vec<usize> = (0..faces.len())
                .filter(|&f| frag.attachments.iter().all(|a| faces[f].contains(a)))
                .collect();
            match admissible.len() {
                0 => return false,
                1 => {
                    choice = Some((i, admissible[0]));
                    break;
                }
                _ => {
                    if choice.is_none() {
                        choice = Some((i, admissible[0]));
                    }
                }
            }
        }
        let (fi, face_idx) = choice.expect("some fragment remains while edges are missing");
        let path = fragment_path(g, &fragments[fi], &embedded_v);
        for w in path.windows(2) {
            embedded_e[w[0]][w[1]] = true;
            embedded_e[w[1]][w[0]] = true;
            embedded_count += 1;
        }
        for &v in &path {
            embedded_v[v] = true;
        }
        let face = faces.swap_remove(face_idx);
        let (f1, f2) = split_face(&face, &path);
        faces.push(f1);
        faces.push(f2);
    }
    true
}

/// Any cycle of a 2-connected graph: close the first edge by a shortest
/// path avoiding it.
fn initial_cycle(g: &Graph) -> Vec<usize> {
    let (s, t) = g.edges()[0];
    let n = g.n();
    let mut prev = vec![usize::MAX; n];
    prev[s] = s;
    let mut queue = std::collections::VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        if v == t {
            break;
        }
        for &w in g.neighbors(v) {
            if prev[w] == usize::MAX && !(v == s && w == t) {
                prev[w] = v;
                queue.push_back(w);
            }
        }
    }
    assert_ne!(
        prev[t],
        usize::MAX,
        "2-connected block has a cycle through every edge"
    );
    let mut cycle = vec![t];
    let mut v = t;
    while v != s {
        v = prev[v];
        cycle.push(v);
    }
    cycle
}

fn fragments(g: &Graph, embedded_v: &[bool], embedded_e: &[Vec<bool>]) -> Vec<Fragment> {
    let n = g.n();
    let mut out = Vec::new();
    for (u, v) in g.edges() {
        if embedded_v[u] && embedded_v[v] && !embedded_e[u][v] {
            out.push(Fragment {
                attachments: vec![u, v],
                chord: Some((u, v)),
                interior: Vec::new(),
            });
        }
    }
    let mut seen = vec![false; n];
    for s in 0..n {
        if embedded_v[s] || seen[s] {
            continue;
        }
        seen[s] = true;
        let mut interior = vec![s];
        let mut attachments = Vec::new();
        let mut i = 0;
        while i < interior.len() {
            let v = interior[i];
            i += 1;
            for &w in g.neighbors(v) {
                if embedded_v[w] {
                    attachments.push(w);
                } else if !seen[w] {
                    seen[w] = true;
                    interior.push(w);
                }
            }
        }
        attachments.sort_unstable();
        attachments.dedup();
        out.push(Fragment {
            attachments,
            chord: None,
            interior,
        });
    }
    out
}

/// A path through the fragment joining two distinct attachment vertices.
fn fragment_path(g: &Graph, frag: &Fragment, embedded_v: &[bool]) -> Vec<usize> {
    if let Some((u, v)) = frag.chord {
        return vec![u, v];
    }
    let a = frag.attachments[0];
    let n = g.n();
    let mut in_frag = vec![false; n];
    for &v in &frag.interior {
        in_frag[v] = true;
    }
    let mut prev = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    for &w in g.neighbors(a) {
        if in_frag[w] {
            prev[w] = a;
            queue.push_back(w);
        }
    }
    while let Some(x) = queue.pop_front() {
        if let Some(&b) = g.neighbors(x).iter().find(|&&b| b != a && embedded_v[b]) {
            let mut path = vec![b, x];
            let mut v = x;
            while prev[v] != a {
                v = prev[v];
                path.push(v);
            }
            path.push(a);
            path.reverse();
            return path;
        }
        for &w in g.neighbors(x) {
            if in_frag[w] && prev[w] == usize::MAX {
                prev[w] = x;
                queue.push_back(w);
            }
        }
    }
    unreachable!("fragments of a 2-connected block have two attachments")
}

fn split_face(face: &[usize], path: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let a = path[0];
    let b = *path.last().expect("path has endpoints");
    let start = face
        .iter()
        .position(|&v| v == a)
        .expect("attachment on face");
    let k = face.len();
    let rotated: Vec<usize> = (0..k).map(|i| face[(start + i) % k]).collect();
    let bi = rotated
        .iter()
        .position(|&v| v == b)
        .expect("attachment on face");
    let interior = &path[1..path.len() - 1];
    let mut f1: Vec<usize> = rotated[..=bi].to_vec();
    f1.extend(interior.iter().rev());
    let mut f2: Vec<usize> = rotated[bi..].to_vec();
    f2.push(a);
    f2.extend(interior.iter());
    (f1, f2)
}
