//! Isomorphism and canonical labeling for small graphs.
//!
//! Both routines start from colour refinement and then backtrack inside the
//! colour classes. That is exhaustive in the worst case, which is fine for
//! the graph sizes this crate works with (kernels of a few dozen vertices,
//! enumeration up to seven vertices).

use std::collections::BTreeMap;

use crate::graph::Graph;

/// Stable colour refinement starting from `initial`. Colour ids are ranks of
/// sorted signatures, so they are invariant under relabeling.
fn refine(g: &Graph, initial: &[usize]) -> Vec<usize> {
    let mut colors = initial.to_vec();
    let mut classes = count_distinct(&colors);
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..g.n())
            .map(|v| {
                let mut nb: Vec<usize> = g.neighbors(v).iter().map(|&w| colors[w]).collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let mut table: BTreeMap<&(usize, Vec<usize>), usize> = BTreeMap::new();
        for s in &sigs {
            table.insert(s, 0);
        }
        for (rank, slot) in table.values_mut().enumerate() {
            *slot = rank;
        }
        let next: Vec<usize> = sigs.iter().map(|s| table[s]).collect();
        let next_classes = table.len();
        colors = next;
        if next_classes == classes {
            return colors;
        }
        classes = next_classes;
    }
}

fn count_distinct(xs: &[usize]) -> usize {
    let mut v = xs.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

/// An isomorphism `a -> b` as a vertex map, if one exists.
pub fn find_isomorphism(a: &Graph, b: &Graph) -> Option<Vec<usize>> {
    let n = a.n();
    if n != b.n() || a.edge_count() != b.edge_count() {
        return None;
    }
    let mut da = a.degrees();
    let mut db = b.degrees();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return None;
    }
    // Refine the disjoint union so colours are comparable across the pair.
    let union = a.disjoint_union(b);
    let colors = refine(&union, &vec![0; 2 * n]);
    let (ca, cb) = colors.split_at(n);
    let mut hist_a = ca.to_vec();
    let mut hist_b = cb.to_vec();
    hist_a.sort_unstable();
    hist_b.sort_unstable();
    if hist_a != hist_b {
        return None;
    }
    // Visit `a` in BFS order, rarest colour first, so adjacency constraints
    // bite early.
    let mut freq = BTreeMap::new();
    for &c in ca {
        *freq.entry(c).or_insert(0usize) += 1;
    }
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    while order.len() < n {
        let start = (0..n)
            .filter(|&v| !placed[v])
            .min_by_key(|&v| (freq[&ca[v]], ca[v], v))
            .expect("unplaced vertex");
        placed[start] = true;
        let mut i = order.len();
        order.push(start);
        while i < order.len() {
            let v = order[i];
            i += 1;
            for &w in a.neighbors(v) {
                if !placed[w] {
                    placed[w] = true;
                    order.push(w);
                }
            }
        }
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if extend_iso(a, b, ca, cb, &order, 0, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn extend_iso(
    a: &Graph,
    b: &Graph,
    ca: &[usize],
    cb: &[usize],
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    for t in 0..b.n() {
        if used[t] || cb[t] != ca[v] {
            continue;
        }
        let consistent = order[..depth]
            .iter()
            .all(|&u| a.has_edge(u, v) == b.has_edge(map[u], t));
        if !consistent {
            continue;
        }
        map[v] = t;
        used[t] = true;
        if extend_iso(a, b, ca, cb, order, depth + 1, map, used) {
            return true;
        }
        used[t] = false;
        map[v] = usize::MAX;
    }
    false
}

pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    find_isomorphism(a, b).is_some()
}

/// Canonical form: the lexicographically greatest lower-triangle adjacency
/// string over all orderings that respect the refined colour order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    n: usize,
    bits: Vec<bool>,
}

impl CanonicalForm {
    pub fn n(&self) -> usize {
        self.n
    }

    /// The graph relabeled into canonical order.
    pub fn to_graph(&self) -> Graph {
        let mut edges = Vec::new();
        let mut k = 0;
        for i in 0..self.n {
            for j in 0..i {
                if self.bits[k] {
                    edges.push((j, i));
                }
                k += 1;
            }
        }
        Graph::new(self.n, &edges).expect("canonical bits describe a simple graph")
    }
}

pub fn canonical_form(g: &Graph) -> CanonicalForm {
    let n = g.n();
    let colors = refine(g, &vec![0; n]);
    let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        cells.entry(colors[v]).or_default().push(v);
    }
    // Position i of the final ordering must hold a vertex of colour slots[i].
    let slots: Vec<usize> = cells
        .iter()
        .flat_map(|(&c, vs)| vec![c; vs.len()])
        .collect();
    let mut search = CanonSearch {
        g,
        colors: &colors,
        slots: &slots,
        order: Vec::with_capacity(n),
        used: vec![false; n],
        bits: Vec::with_capacity(n * n.saturating_sub(1) / 2),
        best: None,
    };
    search.run();
    CanonicalForm {
        n,
        bits: search.best.unwrap_or_default(),
    }
}

struct CanonSearch<'a> {
    g: &'a Graph,
    colors: &'a [usize],
    slots: &'a [usize],
    order: Vec<usize>,
    used: Vec<bool>,
    bits: Vec<bool>,
    best: Option<Vec<bool>>,
}

impl CanonSearch<'_> {
    fn run(&mut self) {
        let depth = self.order.len();
        if depth == self.slots.len() {
            let better = match &self.best {
                None => true,
                Some(b) => self.bits > *b,
            };
            if better {
                self.best = Some(self.bits.clone());
            }
            return;
        }
        for v in 0..self.g.n() {
            if self.used[v] || self.colors[v] != self.slots[depth] {
                continue;
            }
            let mark = self.bits.len();
            for &u in &self.order {
                self.bits.push(self.g.has_edge(u, v));
            }
            // Prune prefixes that already lose to the incumbent.
            let keep = match &self.best {
                None => true,
                Some(b) => self.bits[..] >= b[..self.bits.len()],
            };
            if keep {
                self.used[v] = true;
                self.order.push(v);
                self.run();
                self.order.pop();
                self.used[v] = false;
            }
            self.bits.truncate(mark);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn relabel(g: &Graph, perm: &[usize]) -> Graph {
        let edges: Vec<_> = g.edges().iter().map(|&(u, v)| (perm[u], perm[v])).collect();
        Graph::new(g.n(), &edges).unwrap()
    }

    #[test]
    fn canonical_form_is_label_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let n = rng.gen_range(1..9);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.4) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::new(n, &edges).unwrap();
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let h = relabel(&g, &perm);
            assert_eq!(canonical_form(&g), canonical_form(&h));
            let map = find_isomorphism(&g, &h).expect("relabeling is an isomorphism");
            for (u, v) in g.edges() {
                assert!(h.has_edge(map[u], map[v]));
            }
            assert!(are_isomorphic(&canonical_form(&g).to_graph(), &g));
        }
    }

    #[test]
    fn distinguishes_non_isomorphic() {
        // Two 2-regular graphs on 6 vertices refinement cannot separate.
        let c6 = Graph::cycle(6);
        let two_c3 = Graph::cycle(3).disjoint_union(&Graph::cycle(3));
        assert!(!are_isomorphic(&c6, &two_c3));
        assert_ne!(canonical_form(&c6), canonical_form(&two_c3));
        let k33 = Graph::complete_bipartite(3, 3);
        let prism = Graph::cycle(3).cartesian_product(&Graph::complete(2));
        assert!(!are_isomorphic(&k33, &prism));
        assert_ne!(canonical_form(&k33), canonical_form(&prism));
    }
}
