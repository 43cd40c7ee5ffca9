use crate::complex::RegularCwComplex;
use crate::morse::GradientVectorField;

use super::path::MorsePath;

/// Cells as vertices; `u -> v` when `v` is a proper face of `u` or when
/// `{u, v}` is a regular pair with `v` the upper cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomDigraph {
    adj: Vec<Vec<usize>>,
}

pub fn build_digraph(cx: &RegularCwComplex, v: &GradientVectorField) -> HomDigraph {
    let adj = (0..cx.len())
        .map(|u| {
            let mut out = cx.proper_faces(u).to_vec();
            if let Some(p) = v.partner(u).filter(|&p| cx.dim(p) == cx.dim(u) + 1) {
                out.push(p);
            }
            out.sort_unstable();
            out
        })
        .collect();
    HomDigraph { adj }
}

impl HomDigraph {
    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    /// Out-neighbors in ascending (lexicographic id) order.
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    /// Every simple path starting at `w` (including the trivial one), in
    /// depth-first order with lexicographic neighbor choice.
    pub fn simple_paths_from(&self, w: usize) -> Vec<MorsePath> {
        let mut out = Vec::new();
        let mut on_path = vec![false; self.adj.len()];
        let mut path = vec![w];
        on_path[w] = true;
        // stack of next-neighbor positions, parallel to `path`
        let mut pos = vec![0usize];
        out.push(MorsePath::new(path.clone()));
        while let Some(&u) = path.last() {
            let i = pos.last_mut().expect("parallel stacks");
            match self.adj[u].get(*i) {
                Some(&next) => {
                    *i += 1;
                    if !on_path[next] {
                        on_path[next] = true;
                        path.push(next);
                        pos.push(0);
                        out.push(MorsePath::new(path.clone()));
                    }
                }
                None => {
                    on_path[u] = false;
                    path.pop();
                    pos.pop();
                }
            }
        }
        out
    }
}

/// All simple `w -> z` paths; `w = z` gives the identity path alone.
pub fn enumerate_morphisms(g: &HomDigraph, w: usize, z: usize) -> Vec<MorsePath> {
    if w == z {
        return vec![MorsePath::identity(w)];
    }
    g.simple_paths_from(w).into_iter().filter(|p| p.target() == z).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn edge_counts() {
        let (cx, v) = fixtures::d3();
        // 18 proper-face relations and 2 pair edges
        assert_eq!(build_digraph(&cx, &v).edge_count(), 20);
        let (_, edge) = crate::complex::from_simplicial(&[vec![0, 1]]).unwrap();
        assert_eq!(build_digraph(&edge, &GradientVectorField::empty(&edge)).edge_count(), 2);
        let (cx, v) = fixtures::circle();
        assert_eq!(build_digraph(&cx, &v).edge_count(), 8);
    }

    #[test]
    fn unreachable_and_identity() {
        let (cx, v) = fixtures::d3();
        let g = build_digraph(&cx, &v);
        let (f, x) = (cx.index_of("f").unwrap(), cx.index_of("x").unwrap());
        assert!(enumerate_morphisms(&g, x, f).is_empty());
        assert_eq!(enumerate_morphisms(&g, f, f), vec![MorsePath::identity(f)]);
    }

    #[test]
    fn torus_hom_a_alpha() {
        let (cx, v) = fixtures::torus();
        let g = build_digraph(&cx, &v);
        let paths = enumerate_morphisms(&g, cx.index_of("A").unwrap(), cx.index_of("alpha").unwrap());
        let arrows: Vec<String> = paths.iter().map(|p| p.arrow(&cx)).collect();
        assert_eq!(arrows, vec!["A>alpha", "A>gamma<C>alpha"]);
    }
}
