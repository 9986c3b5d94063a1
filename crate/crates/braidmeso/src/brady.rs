//! The Brady complex X: vertices are cosets g<x> in the central quotient,
//! edges come from right multiplication by the six band generators, and the
//! sixteen expressions of x = bac spell out the triangles.
//!
//! Labels on directions depend on the choice of coset representative; the
//! atlas pins the minimal representative under the canonical element order,
//! and every derived structure (links, faces, corner labels) is computed
//! relative to that representative and cross-validated between vertices.

use crate::band::{band_generators, expressions_16};
use crate::error::Error;
use crate::garside::BraidElement;
use crate::linkgraph::{
    build_l, labeled_isomorphic, x_conjugation_on_letters, Edge, LabeledMetricGraph, Vertex,
};
use crate::quotient::{project, q_power, x_bar, QuotientElement};
use std::collections::{BTreeMap, BTreeSet, HashMap};

pub type VId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub enum FaceKind {
    Triangle,
    LozengeHalf,
}

/// A face based at a vertex: the boundary walk reads the expression letters.
#[derive(Debug, Clone)]
pub struct FaceAt {
    pub expr: [u8; 3],
    /// base, base*a1, base*a1*a2 (canonical vertex ids)
    pub verts: [VId; 3],
}

impl FaceAt {
    pub fn key(&self) -> [VId; 3] {
        let mut k = self.verts;
        k.sort();
        k
    }

    pub fn kind(&self) -> FaceKind {
        if self.expr.iter().any(|&g| g == 1 || g == 3) {
            FaceKind::LozengeHalf
        } else {
            FaceKind::Triangle
        }
    }

    /// Corner label at the base vertex: 1 in triangles, 2 opposite the
    /// lozenge diagonal, 3 beside it.
    pub fn corner_label(&self) -> u8 {
        let bd = |g: u8| g == 1 || g == 3;
        if self.expr.iter().any(|&g| bd(g)) {
            if bd(self.expr[1]) {
                2
            } else {
                3
            }
        } else {
            1
        }
    }

    /// The valence-2 diagonal edge for lozenge halves.
    pub fn diagonal(&self) -> Option<(VId, VId)> {
        let bd = |g: u8| g == 1 || g == 3;
        if bd(self.expr[0]) {
            Some((self.verts[0], self.verts[1]))
        } else if bd(self.expr[1]) {
            Some((self.verts[1], self.verts[2]))
        } else if bd(self.expr[2]) {
            Some((self.verts[2], self.verts[0]))
        } else {
            None
        }
    }
}

struct VertexRecord {
    rep: QuotientElement,
    /// 12 neighbors indexed by direction: 0..6 = a+..f+, 6..12 = a-..f-.
    nbrs: Option<[VId; 12]>,
    faces: Option<Vec<FaceAt>>,
}

pub struct Atlas {
    pub gens: [QuotientElement; 6],
    xbar: [QuotientElement; 4],
    exprs: Vec<[usize; 3]>,
    verts: Vec<VertexRecord>,
    index: HashMap<QuotientElement, VId>,
}

impl Atlas {
    pub fn new() -> Self {
        let (band, report) = band_generators().expect("band generator relations must hold");
        assert!(report.all_hold(), "band relation report failed");
        let gens: [QuotientElement; 6] = std::array::from_fn(|i| project(&band.gens[i]));
        let xb = x_bar();
        let xbar = std::array::from_fn(|k| q_power(&xb, k as i32));
        let mut atlas = Atlas {
            gens,
            xbar,
            exprs: expressions_16(),
            verts: Vec::new(),
            index: HashMap::new(),
        };
        atlas.vertex_of_quotient(&QuotientElement::identity());
        atlas
    }

    /// Canonical representative of the coset g<x>: minimal among the four
    /// translates.
    pub fn canonical_rep(&self, g: &QuotientElement) -> QuotientElement {
        self.xbar
            .iter()
            .map(|xk| g.mul(xk))
            .min()
            .expect("four coset members")
    }

    pub fn vertex_of_quotient(&mut self, g: &QuotientElement) -> VId {
        let rep = self.canonical_rep(g);
        if let Some(&id) = self.index.get(&rep) {
            return id;
        }
        let id = self.verts.len() as VId;
        self.index.insert(rep.clone(), id);
        self.verts.push(VertexRecord {
            rep,
            nbrs: None,
            faces: None,
        });
        id
    }

    pub fn vertex_of(&mut self, g: &BraidElement) -> VId {
        self.vertex_of_quotient(&project(g))
    }

    pub fn base_vertex(&self) -> VId {
        0
    }

    pub fn rep(&self, v: VId) -> &QuotientElement {
        &self.verts[v as usize].rep
    }

    pub fn vertex_count(&self) -> usize {
        self.verts.len()
    }

    /// The 12 neighbors in direction order a+..f+, a-..f-.
    pub fn neighbors(&mut self, v: VId) -> [VId; 12] {
        if let Some(n) = self.verts[v as usize].nbrs {
            return n;
        }
        let rep = self.verts[v as usize].rep.clone();
        let mut out = [0 as VId; 12];
        for i in 0..6 {
            let gen = self.gens[i].clone();
            out[i] = self.vertex_of_quotient(&rep.mul(&gen));
            out[6 + i] = self.vertex_of_quotient(&rep.mul(&gen.inv()));
        }
        let distinct: BTreeSet<VId> = out.iter().copied().collect();
        assert_eq!(distinct.len(), 12, "vertex must have 12 distinct neighbors");
        self.verts[v as usize].nbrs = Some(out);
        out
    }

    /// Sixteen faces based at the canonical representative of v.
    pub fn faces_at(&mut self, v: VId) -> Vec<FaceAt> {
        if let Some(f) = &self.verts[v as usize].faces {
            return f.clone();
        }
        let rep = self.verts[v as usize].rep.clone();
        let exprs = self.exprs.clone();
        let mut out = Vec::with_capacity(16);
        for t in exprs {
            let g1 = rep.mul(&self.gens[t[0]]);
            let g2 = g1.mul(&self.gens[t[1]]);
            let v1 = self.vertex_of_quotient(&g1);
            let v2 = self.vertex_of_quotient(&g2);
            out.push(FaceAt {
                expr: [t[0] as u8, t[1] as u8, t[2] as u8],
                verts: [v, v1, v2],
            });
        }
        // sixteen distinct faces with distinct sorted keys
        let keys: BTreeSet<[VId; 3]> = out.iter().map(|f| f.key()).collect();
        assert_eq!(keys.len(), 16, "face keys collide at vertex {v}");
        self.verts[v as usize].faces = Some(out.clone());
        out
    }

    /// Faces containing the (unordered) edge {u, v}.
    pub fn faces_on_edge(&mut self, u: VId, v: VId) -> Vec<FaceAt> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for w in [u, v] {
            for f in self.faces_at(w) {
                let k = f.key();
                let has_u = f.verts.contains(&u);
                let has_v = f.verts.contains(&v);
                if has_u && has_v && seen.insert(k) {
                    out.push(f);
                }
            }
        }
        out
    }

    /// Which direction (0..12) points from v to w, if they are adjacent.
    pub fn direction_of(&mut self, v: VId, w: VId) -> Option<usize> {
        let n = self.neighbors(v);
        n.iter().position(|&x| x == w)
    }

    /// The |<x>|-to-1 covering property: translating the representative by
    /// the stabilizer relabels directions but keeps the neighbor set.
    pub fn verify_cover_at(&mut self, v: VId) -> bool {
        let rep = self.verts[v as usize].rep.clone();
        let base: BTreeSet<VId> = self.neighbors(v).iter().copied().collect();
        for k in 1..4 {
            let alt = rep.mul(&self.xbar[k]);
            let mut set = BTreeSet::new();
            for i in 0..6 {
                let gen = self.gens[i].clone();
                set.insert(self.vertex_of_quotient(&alt.mul(&gen)));
                set.insert(self.vertex_of_quotient(&alt.mul(&gen.inv())));
            }
            if set != base {
                return false;
            }
        }
        true
    }

    /// The link at a vertex as a labeled metric graph on the 12 directions.
    pub fn link_of(&mut self, v: VId) -> LabeledMetricGraph {
        let names = ['a', 'b', 'c', 'd', 'e', 'f'];
        let mut vertices = Vec::with_capacity(12);
        for n in names {
            vertices.push(Vertex {
                name: format!("{n}+"),
                tag: Some(format!("{n}+")),
            });
        }
        for n in names {
            vertices.push(Vertex {
                name: format!("{n}-"),
                tag: Some(format!("{n}-")),
            });
        }
        let faces = self.faces_at(v);
        let nbrs = self.neighbors(v);
        let mut edges = Vec::with_capacity(16);
        for f in &faces {
            let out_dir = f.expr[0] as usize; // direction a1+
            let close_dir = nbrs
                .iter()
                .position(|&x| x == f.verts[2])
                .expect("closing vertex must be a neighbor");
            edges.push(Edge {
                u: out_dir,
                v: close_dir,
                label: f.corner_label(),
                units: 1,
            });
        }
        LabeledMetricGraph {
            name: format!("link@{}", self.verts[v as usize].rep.text_form()),
            vertices,
            edges,
        }
    }
}

impl Default for Atlas {
    fn default() -> Self {
        Self::new()
    }
}

/// A finite piece of the complex: vertices with BFS distances from the
/// center, plus the face set under the chosen inclusion rule.
#[derive(Debug, Clone)]
pub struct ComplexBall {
    pub center: VId,
    pub radius: u32,
    pub dist: BTreeMap<VId, u32>,
    pub faces: BTreeMap<[VId; 3], FaceKind>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceInclusion {
    /// Faces with all three corners inside the ball.
    Induced,
    /// Faces incident to a vertex at distance < radius (union of closed
    /// stars of the smaller ball).
    Star,
}

pub fn ball_complex(
    atlas: &mut Atlas,
    center: VId,
    radius: u32,
    inclusion: FaceInclusion,
    budget: usize,
) -> Result<ComplexBall, Error> {
    let mut dist = BTreeMap::new();
    dist.insert(center, 0u32);
    let mut frontier = vec![center];
    for d in 1..=radius {
        let mut next = Vec::new();
        for &v in &frontier {
            for w in atlas.neighbors(v) {
                if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(w) {
                    e.insert(d);
                    next.push(w);
                    if dist.len() > budget {
                        return Err(Error::ResourceLimit {
                            what: format!("complex ball of radius {radius}"),
                            budget,
                        });
                    }
                }
            }
        }
        frontier = next;
    }
    let mut faces = BTreeMap::new();
    let verts: Vec<(VId, u32)> = dist.iter().map(|(&v, &d)| (v, d)).collect();
    for (v, d) in verts {
        let include_from_here = match inclusion {
            FaceInclusion::Induced => d <= radius,
            FaceInclusion::Star => d < radius,
        };
        if !include_from_here {
            continue;
        }
        for f in atlas.faces_at(v) {
            let ok = match inclusion {
                FaceInclusion::Induced => f.verts.iter().all(|w| dist.contains_key(w)),
                FaceInclusion::Star => true,
            };
            if ok {
                faces.insert(f.key(), f.kind());
            }
        }
    }
    Ok(ComplexBall {
        center,
        radius,
        dist,
        faces,
    })
}

impl ComplexBall {
    pub fn edges(&self) -> BTreeSet<(VId, VId)> {
        let mut out = BTreeSet::new();
        for k in self.faces.keys() {
            for (i, j) in [(0, 1), (1, 2), (0, 2)] {
                let (a, b) = (k[i].min(k[j]), k[i].max(k[j]));
                out.insert((a, b));
            }
        }
        out
    }

    pub fn vertices_of_faces(&self) -> BTreeSet<VId> {
        self.faces.keys().flat_map(|k| k.iter().copied()).collect()
    }

    /// V - E + F over the face-spanned subcomplex.
    pub fn euler_characteristic(&self) -> i64 {
        let v = self.vertices_of_faces().len() as i64;
        let e = self.edges().len() as i64;
        let f = self.faces.len() as i64;
        v - e + f
    }

    /// Valence of an edge within this ball.
    pub fn edge_valence(&self, u: VId, v: VId) -> usize {
        self.faces
            .keys()
            .filter(|k| k.contains(&u) && k.contains(&v))
            .count()
    }
}

/// Link-gluing face detection, independent of the based-expression tables:
/// a triangle of the 1-skeleton is accepted iff at each of its corners the
/// two adjacent directions form an edge of that vertex's link.
pub fn model2_faces(atlas: &mut Atlas, ball: &ComplexBall) -> BTreeSet<[VId; 3]> {
    let verts: Vec<VId> = ball.dist.keys().copied().collect();
    let interior: BTreeSet<VId> = ball
        .dist
        .iter()
        .filter(|(_, &d)| d < ball.radius)
        .map(|(&v, _)| v)
        .collect();
    let mut links: BTreeMap<VId, LabeledMetricGraph> = BTreeMap::new();
    for &v in &interior {
        links.insert(v, atlas.link_of(v));
    }
    let mut out = BTreeSet::new();
    for &u in &verts {
        if !interior.contains(&u) {
            continue;
        }
        let nu = atlas.neighbors(u);
        for (i, &v) in nu.iter().enumerate() {
            for &w in nu.iter().skip(i + 1) {
                if !interior.contains(&v) || !interior.contains(&w) {
                    continue;
                }
                if atlas.direction_of(v, w).is_none() {
                    continue;
                }
                // corner test at u, v, w
                let corner = |links: &BTreeMap<VId, LabeledMetricGraph>,
                              atlas: &mut Atlas,
                              at: VId,
                              p: VId,
                              q: VId| {
                    let link = &links[&at];
                    let dp = atlas.direction_of(at, p).unwrap();
                    let dq = atlas.direction_of(at, q).unwrap();
                    link.has_edge(dp, dq)
                };
                if corner(&links, atlas, u, v, w)
                    && corner(&links, atlas, v, u, w)
                    && corner(&links, atlas, w, u, v)
                {
                    let mut k = [u, v, w];
                    k.sort();
                    out.insert(k);
                }
            }
        }
    }
    out
}

/// Compare group-theoretic faces against the link-gluing detection on faces
/// whose three corners are interior. A mismatch is a hard modeling failure.
pub fn two_model_face_check(atlas: &mut Atlas, ball: &ComplexBall) -> Result<usize, Error> {
    let interior: BTreeSet<VId> = ball
        .dist
        .iter()
        .filter(|(_, &d)| d < ball.radius)
        .map(|(&v, _)| v)
        .collect();
    let m1: BTreeSet<[VId; 3]> = ball
        .faces
        .keys()
        .filter(|k| k.iter().all(|v| interior.contains(v)))
        .copied()
        .collect();
    let m2 = model2_faces(atlas, ball);
    if m1 != m2 {
        let only1: Vec<_> = m1.difference(&m2).collect();
        let only2: Vec<_> = m2.difference(&m1).collect();
        return Err(Error::ConstructionInconsistent(format!(
            "face models disagree: {} only in expressions, {} only in link gluing",
            only1.len(),
            only2.len()
        )));
    }
    Ok(m1.len())
}

/// Check that every interior link is label-isomorphic to L.
pub fn verify_links(atlas: &mut Atlas, ball: &ComplexBall) -> Result<usize, Error> {
    let l = build_l();
    let mut checked = 0;
    let interior: Vec<VId> = ball
        .dist
        .iter()
        .filter(|(_, &d)| d < ball.radius)
        .map(|(&v, _)| v)
        .collect();
    for v in interior {
        let link = atlas.link_of(v);
        if !labeled_isomorphic(&link, &l) {
            return Err(Error::ConstructionInconsistent(format!(
                "link at vertex {v} is not isomorphic to L"
            )));
        }
        checked += 1;
    }
    Ok(checked)
}

/// Letter permutation done by the coset stabilizer, exposed for tests.
pub fn stabilizer_letter_action() -> [usize; 6] {
    x_conjugation_on_letters()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::garside::normalize_str;

    #[test]
    fn base_vertex_has_12_distinct_neighbors() {
        let mut atlas = Atlas::new();
        let o = atlas.base_vertex();
        let n = atlas.neighbors(o);
        let set: BTreeSet<VId> = n.iter().copied().collect();
        assert_eq!(set.len(), 12);
    }

    #[test]
    fn coset_members_share_the_vertex() {
        let mut atlas = Atlas::new();
        let g = project(&normalize_str("abC").unwrap());
        let v1 = atlas.vertex_of_quotient(&g);
        let xb = x_bar();
        let v2 = atlas.vertex_of_quotient(&g.mul(&xb));
        assert_eq!(v1, v2);
    }

    #[test]
    fn four_to_one_cover_relabels_only() {
        let mut atlas = Atlas::new();
        let o = atlas.base_vertex();
        assert!(atlas.verify_cover_at(o));
        let v = atlas.neighbors(o)[2];
        assert!(atlas.verify_cover_at(v));
    }

    #[test]
    fn link_at_base_is_l() {
        let mut atlas = Atlas::new();
        let o = atlas.base_vertex();
        let link = atlas.link_of(o);
        let l = build_l();
        assert!(labeled_isomorphic(&link, &l));
    }

    #[test]
    fn ball_one_face_count_matches_link_edges() {
        let mut atlas = Atlas::new();
        let o = atlas.base_vertex();
        let ball = ball_complex(&mut atlas, o, 1, FaceInclusion::Star, 100_000).unwrap();
        // faces at the center = edges of L = 16
        let at_center = ball
            .faces
            .keys()
            .filter(|k| k.contains(&o))
            .count();
        assert_eq!(at_center, 16);
    }

    #[test]
    fn interior_edge_valences_are_two_or_three() {
        let mut atlas = Atlas::new();
        let o = atlas.base_vertex();
        let ball = ball_complex(&mut atlas, o, 2, FaceInclusion::Star, 100_000).unwrap();
        let nbrs = atlas.neighbors(o);
        for (dir, &w) in nbrs.iter().enumerate() {
            let val = ball.edge_valence(o, w);
            let expect = if dir % 6 == 1 || dir % 6 == 3 { 2 } else { 3 };
            assert_eq!(val, expect, "direction {dir}");
        }
    }

    #[test]
    fn lozenge_halves_pair_across_diagonals() {
        let mut atlas = Atlas::new();
        let o = atlas.base_vertex();
        for f in atlas.faces_at(o) {
            if let Some((u, v)) = f.diagonal() {
                let on_edge = atlas.faces_on_edge(u, v);
                assert_eq!(on_edge.len(), 2, "diagonal must bound exactly two halves");
                assert!(on_edge.iter().all(|g| g.kind() == FaceKind::LozengeHalf));
            }
        }
    }

    #[test]
    fn two_models_agree_on_radius_two() {
        let mut atlas = Atlas::new();
        let o = atlas.base_vertex();
        let ball = ball_complex(&mut atlas, o, 2, FaceInclusion::Star, 100_000).unwrap();
        let n = two_model_face_check(&mut atlas, &ball).unwrap();
        assert!(n >= 16);
    }

    #[test]
    fn euler_characteristic_of_small_balls_is_one() {
        let mut atlas = Atlas::new();
        let o = atlas.base_vertex();
        for r in [1u32, 2] {
            let ball = ball_complex(&mut atlas, o, r, FaceInclusion::Star, 100_000).unwrap();
            assert_eq!(ball.euler_characteristic(), 1, "radius {r}");
        }
    }
}
