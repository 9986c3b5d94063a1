//! Flat developments inside the complex: exact placements of face sets in
//! the Euclidean plane, the lattice flat spanned by the commuting pair a, c,
//! singular geodesics, and the three minimal strips along a type-I geodesic.
//!
//! Every certificate here is integer arithmetic: corner counts stand in for
//! angle sums (each triangle corner is exactly pi/3) and coverage reduces to
//! exact point/segment/triangle tests against the region.

use crate::brady::{Atlas, FaceAt, VId};
use crate::error::Error;
use crate::geom::{
    dist2_lt, point_segment_dist2_lt, triangle_meets_open_disk, Pt, Radius2, UNIT_DIRS,
};
use crate::linkgraph::{lemma_lpi_classify, LpiCase};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

/// A consistent placement of faces in the plane: one position per vertex,
/// one vertex per position, faces congruent to their stored coordinates.
#[derive(Debug, Clone, Default)]
pub struct DevelopedSet {
    pub faces: BTreeMap<[VId; 3], [(VId, Pt); 3]>,
    pub pos: BTreeMap<VId, Pt>,
    pub pos_index: BTreeMap<Pt, VId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InsertOutcome {
    Inserted,
    AlreadyPresent,
    /// Some corner collides with a different vertex or position.
    Conflict,
}

impl DevelopedSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn face_keys(&self) -> BTreeSet<[VId; 3]> {
        self.faces.keys().copied().collect()
    }

    pub fn try_place(&mut self, corners: [(VId, Pt); 3]) -> InsertOutcome {
        let mut key = [corners[0].0, corners[1].0, corners[2].0];
        key.sort();
        if let Some(old) = self.faces.get(&key) {
            let mut a = *old;
            let mut b = corners;
            a.sort_by_key(|c| c.0);
            b.sort_by_key(|c| c.0);
            return if a == b {
                InsertOutcome::AlreadyPresent
            } else {
                InsertOutcome::Conflict
            };
        }
        for &(v, p) in &corners {
            if let Some(&q) = self.pos.get(&v) {
                if q != p {
                    return InsertOutcome::Conflict;
                }
            }
            if let Some(&w) = self.pos_index.get(&p) {
                if w != v {
                    return InsertOutcome::Conflict;
                }
            }
        }
        for &(v, p) in &corners {
            self.pos.insert(v, p);
            self.pos_index.insert(p, v);
        }
        self.faces.insert(key, corners);
        InsertOutcome::Inserted
    }

    pub fn contains_face(&self, key: &[VId; 3]) -> bool {
        self.faces.contains_key(key)
    }

    /// Corner count per vertex; 6 at a flat interior vertex.
    pub fn corner_counts(&self) -> BTreeMap<VId, usize> {
        let mut out = BTreeMap::new();
        for corners in self.faces.values() {
            for &(v, _) in corners {
                *out.entry(v).or_insert(0) += 1;
            }
        }
        out
    }

    /// Edges (as placed vertex pairs) with the number of faces on each.
    pub fn edge_face_counts(&self) -> BTreeMap<(VId, VId), usize> {
        let mut out = BTreeMap::new();
        for corners in self.faces.values() {
            for (i, j) in [(0, 1), (1, 2), (0, 2)] {
                let (a, b) = (corners[i].0.min(corners[j].0), corners[i].0.max(corners[j].0));
                *out.entry((a, b)).or_insert(0) += 1;
            }
        }
        out
    }
}

/// A planar region with exact membership tests.
#[derive(Debug, Clone, Copy)]
pub enum Region {
    Disk { center: Pt, r2: Radius2 },
    /// dir is a lattice direction; cross is the integer cross-product value
    /// (sqrt3/4 length units), dot4 the longitudinal dot4 value.
    Band {
        dir: Pt,
        cross_lo: i64,
        cross_hi: i64,
        dot_lo: i64,
        dot_hi: i64,
    },
}

impl Region {
    pub fn cross(dir: Pt, p: Pt) -> i64 {
        dir.p * p.q - dir.q * p.p
    }

    pub fn tri_meets(&self, tri: [Pt; 3]) -> bool {
        match *self {
            Region::Disk { center, r2 } => triangle_meets_open_disk(tri, center, r2),
            Region::Band {
                dir,
                cross_lo,
                cross_hi,
                dot_lo,
                dot_hi,
            } => {
                let cr: Vec<i64> = tri.iter().map(|&p| Self::cross(dir, p)).collect();
                let dt: Vec<i64> = tri.iter().map(|&p| dir.dot4(p)).collect();
                let (cmin, cmax) = (*cr.iter().min().unwrap(), *cr.iter().max().unwrap());
                let (dmin, dmax) = (*dt.iter().min().unwrap(), *dt.iter().max().unwrap());
                cmax > cross_lo && cmin < cross_hi && dmax > dot_lo && dmin < dot_hi
            }
        }
    }

    pub fn point_strictly_inside(&self, p: Pt) -> bool {
        match *self {
            Region::Disk { center, r2 } => dist2_lt(p.sub(center).norm4(), r2),
            Region::Band {
                dir,
                cross_lo,
                cross_hi,
                dot_lo,
                dot_hi,
            } => {
                let c = Self::cross(dir, p);
                let d = dir.dot4(p);
                c > cross_lo && c < cross_hi && d > dot_lo && d < dot_hi
            }
        }
    }

    /// Does the closed segment reach strictly inside the region?
    pub fn segment_meets(&self, a: Pt, b: Pt) -> bool {
        match *self {
            Region::Disk { center, r2 } => point_segment_dist2_lt(center, a, b, r2),
            // segments in this crate's band uses always have lattice endpoints
            Region::Band { .. } => {
                self.point_strictly_inside(a) || self.point_strictly_inside(b)
            }
        }
    }
}

/// Report from forced growth.
#[derive(Debug, Clone)]
pub struct GrowReport {
    pub placed: usize,
    /// Placed faces that were not in any priority pool.
    pub tissue: Vec<[VId; 3]>,
    /// Slots inside the region left ambiguous (several consistent faces).
    pub ambiguous: usize,
    /// Slots inside the region with no consistent candidate at all.
    pub holes: usize,
}

/// Fill region-meeting slots while each has a unique consistent candidate;
/// when several candidates fit, prefer the lowest pool rank and record a
/// tie as ambiguity.
pub fn grow_forced(
    atlas: &mut Atlas,
    dev: &mut DevelopedSet,
    region: &Region,
    pool_rank: &dyn Fn(&[VId; 3]) -> Option<u32>,
) -> GrowReport {
    let mut placed = 0usize;
    let mut tissue = Vec::new();
    loop {
        let mut progressed = false;
        let mut ambiguous = 0usize;
        let mut holes = 0usize;
        let slots = open_slots(dev, region);
        for (a, b, c_pos) in slots {
            let pa = dev.pos[&a];
            let pb = dev.pos[&b];
            let candidates = candidate_faces(atlas, dev, a, b, c_pos);
            match candidates.len() {
                0 => holes += 1,
                1 => {
                    let f = &candidates[0];
                    let third = f.verts.iter().copied().find(|v| *v != a && *v != b).unwrap();
                    let corners = [(a, pa), (b, pb), (third, c_pos)];
                    if dev.try_place(corners) == InsertOutcome::Inserted {
                        if pool_rank(&sorted_key(&f.verts)).is_none() {
                            tissue.push(sorted_key(&f.verts));
                        }
                        placed += 1;
                        progressed = true;
                    }
                }
                _ => {
                    // prefer a uniquely best-ranked pool face
                    let mut ranked: Vec<(u32, &FaceAt)> = candidates
                        .iter()
                        .filter_map(|f| pool_rank(&sorted_key(&f.verts)).map(|r| (r, f)))
                        .collect();
                    ranked.sort_by_key(|(r, _)| *r);
                    let pick: Option<FaceAt> = if ranked.len() == 1
                        || (ranked.len() >= 2 && ranked[0].0 < ranked[1].0)
                    {
                        Some(ranked[0].1.clone())
                    } else {
                        // germ completion: keep candidates whose link edges
                        // still fit on a 2pi cycle at both endpoints
                        let survivors: Vec<&FaceAt> = candidates
                            .iter()
                            .filter(|f| {
                                [a, b].iter().all(|&v| {
                                    cycle_compatible(atlas, dev, v, &sorted_key(&f.verts))
                                })
                            })
                            .collect();
                        if survivors.len() == 1 {
                            Some(survivors[0].clone())
                        } else {
                            None
                        }
                    };
                    if let Some(f) = pick {
                        let third =
                            f.verts.iter().copied().find(|v| *v != a && *v != b).unwrap();
                        let corners = [(a, pa), (b, pb), (third, c_pos)];
                        if dev.try_place(corners) == InsertOutcome::Inserted {
                            if pool_rank(&sorted_key(&f.verts)).is_none() {
                                tissue.push(sorted_key(&f.verts));
                            }
                            placed += 1;
                            progressed = true;
                        }
                    } else {
                        ambiguous += 1;
                    }
                }
            }
        }
        if !progressed {
            return GrowReport {
                placed,
                tissue,
                ambiguous,
                holes,
            };
        }
    }
}

fn sorted_key(verts: &[VId; 3]) -> [VId; 3] {
    let mut k = *verts;
    k.sort();
    k
}

/// Open slots: placed edges with an empty side whose prospective triangle
/// meets the region. Returns (a, b, third-position).
fn open_slots(dev: &DevelopedSet, region: &Region) -> Vec<(VId, VId, Pt)> {
    let mut filled: BTreeSet<(VId, VId, Pt)> = BTreeSet::new();
    let mut edges: BTreeSet<(VId, VId)> = BTreeSet::new();
    for corners in dev.faces.values() {
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            let (a, _) = corners[i];
            let (b, _) = corners[j];
            let (x, _) = corners[3 - i - j];
            let key = if a < b { (a, b) } else { (b, a) };
            edges.insert(key);
            filled.insert((key.0, key.1, dev.pos[&x]));
        }
    }
    let mut out = Vec::new();
    for &(a, b) in &edges {
        let pa = dev.pos[&a];
        let pb = dev.pos[&b];
        let d = pb.sub(pa);
        for c_pos in [pa.add(d.rot60()), pa.add(d.rot_m60())] {
            if filled.contains(&(a, b, c_pos)) {
                continue;
            }
            if region.tri_meets([pa, pb, c_pos]) {
                out.push((a, b, c_pos));
            }
        }
    }
    out
}

/// Faces on the edge {a,b} that can consistently place their third corner at
/// the given position.
fn candidate_faces(atlas: &mut Atlas, dev: &DevelopedSet, a: VId, b: VId, c_pos: Pt) -> Vec<FaceAt> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for f in atlas.faces_on_edge(a, b) {
        let key = sorted_key(&f.verts);
        if !seen.insert(key) || dev.contains_face(&key) {
            continue;
        }
        let third = f.verts.iter().copied().find(|v| *v != a && *v != b).unwrap();
        if let Some(&p) = dev.pos.get(&third) {
            if p != c_pos {
                continue;
            }
        }
        if let Some(&w) = dev.pos_index.get(&c_pos) {
            if w != third {
                continue;
            }
        }
        out.push(f);
    }
    out
}

/// The lattice flat spanned by a and c at a base vertex. Cells are pairs of
/// faces whose shared diagonal is a valence-2 edge; every synthesized face
/// is validated against the atlas face tables.
pub struct FlatPlane {
    pub dev: DevelopedSet,
    pub grid: BTreeMap<(i32, i32), VId>,
}

pub const DIR_A: Pt = UNIT_DIRS[0]; // (2, 0)
pub const DIR_C: Pt = UNIT_DIRS[2]; // (-1, 1): 120 degrees from a

pub fn lattice_point(i: i32, j: i32) -> Pt {
    Pt::new(2 * i as i64 - j as i64, j as i64)
}

pub fn flat_plane_patch(
    atlas: &mut Atlas,
    origin: VId,
    i_range: (i32, i32),
    j_range: (i32, i32),
    cell_filter: &dyn Fn(i32, i32) -> bool,
) -> Result<FlatPlane, Error> {
    let base = atlas.rep(origin).clone();
    let a = atlas.gens[0].clone();
    let c = atlas.gens[2].clone();
    let mut grid: BTreeMap<(i32, i32), VId> = BTreeMap::new();
    // build group elements row by row
    let mut row_start = base.clone();
    let shift = |g: &crate::quotient::QuotientElement, h: &crate::quotient::QuotientElement, n: i32| {
        let mut out = g.clone();
        let step = if n >= 0 { h.clone() } else { h.inv() };
        for _ in 0..n.abs() {
            out = out.mul(&step);
        }
        out
    };
    row_start = shift(&row_start, &a, i_range.0);
    for i in i_range.0..=i_range.1 {
        let mut cur = shift(&row_start, &c, j_range.0);
        for j in j_range.0..=j_range.1 {
            grid.insert((i, j), atlas.vertex_of_quotient(&cur));
            cur = cur.mul(&c);
        }
        row_start = row_start.mul(&a);
    }
    let mut dev = DevelopedSet::new();
    for i in i_range.0..i_range.1 {
        for j in j_range.0..j_range.1 {
            if !cell_filter(i, j) {
                continue;
            }
            let p00 = grid[&(i, j)];
            let p10 = grid[&(i + 1, j)];
            let p01 = grid[&(i, j + 1)];
            let p11 = grid[&(i + 1, j + 1)];
            // cell faces: (p00, p10, p11) and (p00, p01, p11), diagonal p00-p11
            for tri in [[p00, p10, p11], [p00, p01, p11]] {
                let key = sorted_key(&tri);
                let is_face = atlas
                    .faces_at(p00)
                    .iter()
                    .any(|f| sorted_key(&f.verts) == key);
                if !is_face {
                    return Err(Error::ConstructionInconsistent(format!(
                        "lattice cell ({i},{j}) is not a pair of faces"
                    )));
                }
            }
            let c00 = lattice_point(i, j);
            let c10 = lattice_point(i + 1, j);
            let c01 = lattice_point(i, j + 1);
            let c11 = lattice_point(i + 1, j + 1);
            for (tri, coords) in [
                ([p00, p10, p11], [c00, c10, c11]),
                ([p00, p01, p11], [c00, c01, c11]),
            ] {
                let corners = [
                    (tri[0], coords[0]),
                    (tri[1], coords[1]),
                    (tri[2], coords[2]),
                ];
                if dev.try_place(corners) == InsertOutcome::Conflict {
                    return Err(Error::ConstructionInconsistent(format!(
                        "flat plane development conflict at cell ({i},{j})"
                    )));
                }
            }
        }
    }
    Ok(FlatPlane { dev, grid })
}

/// Vertices start * u^i for i in lo..=hi, verified to be a local geodesic.
pub fn singular_geodesic(
    atlas: &mut Atlas,
    start: VId,
    gen: usize,
    lo: i32,
    hi: i32,
) -> Result<Vec<VId>, Error> {
    assert!(gen < 6);
    let base = atlas.rep(start).clone();
    let g = atlas.gens[gen].clone();
    let mut out = Vec::new();
    let mut cur = base.clone();
    let step_back = g.inv();
    for _ in 0..(-lo).max(0) {
        cur = cur.mul(&step_back);
    }
    for _ in lo..=hi {
        out.push(atlas.vertex_of_quotient(&cur));
        cur = cur.mul(&g);
    }
    // local geodesic test at interior vertices
    for w in out.windows(3) {
        classify_geodesic_vertex(atlas, w[1], w[0], w[2])?;
    }
    Ok(out)
}

/// Type of a geodesic vertex per the three-path patterns of its link.
pub fn classify_geodesic_vertex(
    atlas: &mut Atlas,
    v: VId,
    prev: VId,
    next: VId,
) -> Result<LpiCase, Error> {
    let d_in = atlas
        .direction_of(v, prev)
        .ok_or(Error::NotGeodesic)?;
    let d_out = atlas
        .direction_of(v, next)
        .ok_or(Error::NotGeodesic)?;
    let link = atlas.link_of(v);
    let dist = link.metric_dist_units(d_in);
    if dist[d_out] != Some(3) {
        return Err(Error::NotGeodesic);
    }
    Ok(lemma_lpi_classify(&link, d_in, d_out)?.case)
}

#[derive(Debug, Clone, Serialize)]
pub struct StripInfo {
    /// Exact height in units of sqrt3/4.
    pub height_quarters: i64,
    pub height: f64,
    /// Merged label reading of the link paths along the base, oriented.
    pub reading: Vec<u8>,
    /// Far boundary vertices ordered along the strip.
    pub boundary: Vec<VId>,
    pub boundary_type_i: bool,
    pub face_count: usize,
}

#[derive(Debug, Clone)]
pub struct Strip {
    pub faces: BTreeSet<[VId; 3]>,
    pub dev: DevelopedSet,
    pub info: StripInfo,
}

/// The three minimal flat strips along a type-I singular geodesic segment.
/// Faces are matched through the three link paths at each interior vertex
/// and completed by forced growth; pairwise intersections reduce to the
/// base geodesic.
pub fn strips_on(atlas: &mut Atlas, d: &[VId]) -> Result<[Strip; 3], Error> {
    let n = d.len();
    if n < 3 {
        return Err(Error::NotApplicable(
            "need a geodesic segment with at least two edges".into(),
        ));
    }
    // link paths at each interior vertex
    struct VertexPaths {
        // for each of the three paths: ordered faces and merged pattern
        paths: Vec<(Vec<FaceAt>, Vec<u8>)>,
    }
    let mut per_vertex: Vec<VertexPaths> = Vec::new();
    for i in 1..n - 1 {
        let v = d[i];
        let case = classify_geodesic_vertex(atlas, v, d[i - 1], d[i + 1])?;
        if case != LpiCase::CaseI {
            return Err(Error::NotApplicable(
                "strip construction requires a type I geodesic".into(),
            ));
        }
        let faces = atlas.faces_at(v);
        let link = atlas.link_of(v);
        let d_in = atlas.direction_of(v, d[i - 1]).unwrap();
        let d_out = atlas.direction_of(v, d[i + 1]).unwrap();
        let epaths = crate::linkgraph::paths_of_units(&link, d_in, d_out, 3);
        if epaths.len() != 3 {
            return Err(Error::ConstructionInconsistent(format!(
                "expected 3 link paths, got {}",
                epaths.len()
            )));
        }
        let mut paths = Vec::new();
        for ep in epaths {
            let pattern = link.merged_pattern(&ep, false);
            let path_faces: Vec<FaceAt> = ep.iter().map(|&e| faces[e].clone()).collect();
            paths.push((path_faces, pattern));
        }
        per_vertex.push(VertexPaths { paths });
    }
    // match paths across consecutive vertices through the shared edge faces
    let m = per_vertex.len();
    let mut assignment: Vec<[usize; 3]> = vec![[0, 1, 2]; m]; // strip s uses path assignment[i][s]
    for i in 1..m {
        let prev = &per_vertex[i - 1];
        let cur = &per_vertex[i];
        let mut perm = [usize::MAX; 3];
        for s in 0..3 {
            let prev_path = &prev.paths[assignment[i - 1][s]];
            let last_key = sorted_key(&prev_path.0.last().unwrap().verts);
            let mut found = None;
            for (q, path) in cur.paths.iter().enumerate() {
                let first_key = sorted_key(&path.0.first().unwrap().verts);
                if first_key == last_key {
                    found = Some(q);
                    break;
                }
            }
            perm[s] = found.ok_or_else(|| {
                Error::ConstructionInconsistent("strip paths fail to chain along d".into())
            })?;
        }
        let mut sorted = perm;
        sorted.sort();
        if sorted != [0, 1, 2] {
            return Err(Error::ConstructionInconsistent(
                "path matching is not a bijection".into(),
            ));
        }
        assignment[i] = perm;
    }
    // build each strip: seed the fans, then complete by forced growth
    let mut strips = Vec::new();
    for s in 0..3 {
        let mut dev = DevelopedSet::new();
        for (idx, i) in (1..n - 1).enumerate() {
            let v = d[i];
            let base = Pt::new(2 * i as i64, 0);
            let nbrs = atlas.neighbors(v);
            let (path_faces, _) = &per_vertex[idx].paths[assignment[idx][s]];
            // fan positions: X_j at angle 180 - 60 j from the base vertex
            let fan_dirs = [UNIT_DIRS[3], UNIT_DIRS[2], UNIT_DIRS[1], UNIT_DIRS[0]];
            // walk link vertices along the path to learn the X_j vertex ids
            let mut xs = Vec::with_capacity(4);
            xs.push(d[i - 1]);
            for (j, f) in path_faces.iter().enumerate() {
                // f contains v, xs[j], and one more vertex
                let third = f
                    .verts
                    .iter()
                    .copied()
                    .find(|w| *w != v && *w != xs[j])
                    .ok_or_else(|| {
                        Error::ConstructionInconsistent("degenerate fan face".into())
                    })?;
                xs.push(third);
            }
            if xs[3] != d[i + 1] {
                return Err(Error::ConstructionInconsistent(
                    "fan does not terminate at the next geodesic vertex".into(),
                ));
            }
            let _ = nbrs;
            for j in 0..3 {
                let corners = [
                    (v, base),
                    (xs[j], base.add(fan_dirs[j])),
                    (xs[j + 1], base.add(fan_dirs[j + 1])),
                ];
                if dev.try_place(corners) == InsertOutcome::Conflict {
                    return Err(Error::ConstructionInconsistent(
                        "strip fan placement conflict".into(),
                    ));
                }
            }
        }
        // complete within a generous band; growth stops at ambiguity
        let region = Region::Band {
            dir: DIR_A,
            cross_lo: 0,
            cross_hi: 8,
            dot_lo: DIR_A.dot4(Pt::new(2, 0)),
            dot_hi: DIR_A.dot4(Pt::new(2 * (n as i64 - 2), 0)),
        };
        let report = grow_forced(atlas, &mut dev, &region, &|_| None);
        if report.holes > 0 {
            return Err(Error::ConstructionFailure(
                "strip completion left holes".into(),
            ));
        }
        // measure height and extract the far boundary
        let max_cross = dev
            .pos
            .values()
            .map(|&p| Region::cross(DIR_A, p))
            .max()
            .unwrap_or(0);
        let mut boundary: Vec<(i64, VId)> = dev
            .pos
            .iter()
            .filter(|(_, &p)| Region::cross(DIR_A, p) == max_cross)
            .map(|(&v, &p)| (DIR_A.dot4(p), v))
            .collect();
        boundary.sort();
        let boundary: Vec<VId> = boundary.into_iter().map(|(_, v)| v).collect();
        let mut boundary_type_i = boundary.len() >= 3;
        for w in boundary.windows(3) {
            match classify_geodesic_vertex(atlas, w[1], w[0], w[2]) {
                Ok(LpiCase::CaseI) => {}
                _ => {
                    boundary_type_i = false;
                }
            }
        }
        let mid = m / 2;
        let reading = per_vertex[mid].paths[assignment[mid][s]].1.clone();
        let faces = dev.face_keys();
        strips.push(Strip {
            info: StripInfo {
                height_quarters: max_cross,
                height: max_cross as f64 * 3f64.sqrt() / 4.0,
                reading,
                boundary,
                boundary_type_i,
                face_count: faces.len(),
            },
            faces,
            dev,
        });
    }
    // pairwise intersections reduce to the base geodesic
    for i in 0..3 {
        for j in (i + 1)..3 {
            let inter: Vec<_> = strips[i].faces.intersection(&strips[j].faces).collect();
            if !inter.is_empty() {
                return Err(Error::ConstructionInconsistent(format!(
                    "strips {i} and {j} share {} faces",
                    inter.len()
                )));
            }
        }
    }
    let mut it = strips.into_iter();
    Ok([it.next().unwrap(), it.next().unwrap(), it.next().unwrap()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brady::Atlas;

    #[test]
    fn geodesics_along_a_and_c_are_type_i() {
        let mut atlas = Atlas::new();
        let o = atlas.base_vertex();
        for gen in [0usize, 2] {
            let d = singular_geodesic(&mut atlas, o, gen, -3, 3).unwrap();
            assert_eq!(d.len(), 7);
            for w in d.windows(3) {
                let case = classify_geodesic_vertex(&mut atlas, w[1], w[0], w[2]).unwrap();
                assert_eq!(case, LpiCase::CaseI);
            }
        }
    }

    #[test]
    fn flat_plane_vertices_match_lattice_orbit() {
        let mut atlas = Atlas::new();
        let o = atlas.base_vertex();
        let plane = flat_plane_patch(&mut atlas, o, (-3, 3), (-3, 3), &|_, _| true).unwrap();
        // interior vertices have six corners: flatness of the lattice patch
        let counts = plane.dev.corner_counts();
        for i in -2..=2 {
            for j in -2..=2 {
                let v = plane.grid[&(i, j)];
                assert_eq!(counts[&v], 6, "vertex ({i},{j})");
            }
        }
        // vertex_of(a^i c^j) lands on the grid
        let a = atlas.gens[0].clone();
        let c = atlas.gens[2].clone();
        let g = a.mul(&a).mul(&c.inv());
        let expect = plane.grid[&(2, -1)];
        let got = atlas.vertex_of_quotient(&atlas.rep(o).clone().mul(&g));
        assert_eq!(got, expect);
    }

    #[test]
    fn lattice_diagonals_are_valence_two() {
        let mut atlas = Atlas::new();
        let o = atlas.base_vertex();
        let plane = flat_plane_patch(&mut atlas, o, (-1, 1), (-1, 1), &|_, _| true).unwrap();
        let p00 = plane.grid[&(0, 0)];
        let p11 = plane.grid[&(1, 1)];
        assert_eq!(atlas.faces_on_edge(p00, p11).len(), 2);
        let p10 = plane.grid[&(1, 0)];
        assert_eq!(atlas.faces_on_edge(p00, p10).len(), 3);
    }

    #[test]
    fn three_strips_with_lemma_heights() {
        let mut atlas = Atlas::new();
        let o = atlas.base_vertex();
        let d = singular_geodesic(&mut atlas, o, 0, -4, 4).unwrap();
        let strips = strips_on(&mut atlas, &d).unwrap();
        let mut heights: Vec<i64> = strips.iter().map(|s| s.info.height_quarters).collect();
        heights.sort();
        assert_eq!(heights, vec![2, 2, 4], "expected sqrt3/2, sqrt3/2, sqrt3");
        for s in &strips {
            assert!(s.info.boundary_type_i, "reading {:?}", s.info.reading);
        }
        // readings: the two lozenge rows read 3-2 / 2-3, the hexagon 1-2-1
        let mut readings: Vec<Vec<u8>> = strips.iter().map(|s| s.info.reading.clone()).collect();
        readings.sort();
        assert_eq!(readings, vec![vec![1, 2, 1], vec![2, 3], vec![3, 2]]);
    }

    #[test]
    fn hexagon_strip_leaves_the_flat_plane() {
        let mut atlas = Atlas::new();
        let o = atlas.base_vertex();
        let plane = flat_plane_patch(&mut atlas, o, (-6, 6), (-6, 6), &|_, _| true).unwrap();
        let plane_faces = plane.dev.face_keys();
        let d = singular_geodesic(&mut atlas, o, 0, -4, 4).unwrap();
        let strips = strips_on(&mut atlas, &d).unwrap();
        for s in &strips {
            let overlap = s.faces.intersection(&plane_faces).count();
            if s.info.height_quarters == 4 {
                assert_eq!(overlap, 0, "hexagon strip must avoid the flat plane");
            } else {
                assert_eq!(overlap, s.faces.len(), "lozenge rows lie in the plane");
            }
        }
    }
}
