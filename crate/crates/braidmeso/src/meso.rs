//! Construction and certification of the exponential family of flat disks.
//!
//! The assembly follows the sector-plus-strips recipe: a 2pi/3 sector of the
//! lattice flat, hexagon and lozenge strips along its boundary lines, and a
//! tower of strip choices per side. Each resulting disk of radius k+1 around
//! O_k carries an exact flatness certificate, and a forcing chain through
//! the wide-corner obstruction in the link shows it lies in no flat.

use crate::brady::{Atlas, FaceAt, VId};
use crate::error::Error;
use crate::flats::{
    flat_plane_patch, grow_forced, lattice_point, singular_geodesic, strips_on, DevelopedSet,
    InsertOutcome, Region, Strip, DIR_A,
};
use crate::geom::{Pt, Radius2};
use crate::linkgraph::LabeledMetricGraph;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// ceil(k(2/sqrt3 - 1) + (2/sqrt3 - 3)) by exact integer comparison.
pub fn mu_k(k: i64) -> i64 {
    // smallest m with 3(m + k + 3)^2 >= 3 * (2(k+1))^2 / 3 ... rearranged:
    // m >= (2(k+1) - sqrt3 (k+3)) / sqrt3  <=>  sqrt3 (m + k + 3) >= 2(k+1)
    // <=> 3 (m + k + 3)^2 >= 4 (k+1)^2  (both sides positive)
    let mut m = -(k + 3); // makes the left side zero
    loop {
        let lhs = 3 * (m + k + 3) * (m + k + 3);
        let rhs = 4 * (k + 1) * (k + 1);
        if m + k + 3 >= 0 && lhs >= rhs {
            return m;
        }
        m += 1;
    }
}

/// ceil((3/2)^e) as an exact integer.
pub fn ceil_pow_3_2(e: u32) -> u64 {
    let num = 3u128.pow(e);
    let den = 2u128.pow(e);
    num.div_ceil(den) as u64
}

/// One strip level of a side tower, glued into global coordinates.
#[derive(Debug, Clone)]
pub struct GluedStrip {
    pub faces: BTreeSet<[VId; 3]>,
    pub placements: Vec<[(VId, Pt); 3]>,
    pub boundary: Vec<(VId, Pt)>,
    pub height_quarters: i64,
    pub reading: Vec<u8>,
}

fn glue_strip(strip: &Strip, boundary_global: &[(VId, Pt)]) -> Result<GluedStrip, Error> {
    // the strip chart put boundary vertex m at (2m, 0); find the rigid motion
    let g0 = boundary_global[0].1;
    let g1 = boundary_global[1].1;
    let step = g1.sub(g0);
    if step.norm4() != 4 {
        return Err(Error::ConstructionInconsistent(
            "glue boundary is not unit spaced".into(),
        ));
    }
    let mut rot_steps = 0;
    let mut probe = Pt::new(2, 0);
    while probe != step {
        probe = probe.rot60();
        rot_steps += 1;
        if rot_steps > 5 {
            return Err(Error::ConstructionInconsistent(
                "glue direction is not a lattice direction".into(),
            ));
        }
    }
    let apply = |p: Pt| {
        let mut q = p;
        for _ in 0..rot_steps {
            q = q.rot60();
        }
        q.add(g0)
    };
    // chart puts d[0] (the strips_on input) at x = 0; the boundary list fed
    // here must be the same vertex order the strip was built on
    let mut placements = Vec::with_capacity(strip.dev.faces.len());
    for corners in strip.dev.faces.values() {
        placements.push([
            (corners[0].0, apply(corners[0].1)),
            (corners[1].0, apply(corners[1].1)),
            (corners[2].0, apply(corners[2].1)),
        ]);
    }
    let boundary = strip
        .info
        .boundary
        .iter()
        .map(|&v| (v, apply(strip.dev.pos[&v])))
        .collect();
    Ok(GluedStrip {
        faces: strip.faces.clone(),
        placements,
        boundary,
        height_quarters: strip.info.height_quarters,
        reading: strip.info.reading.clone(),
    })
}

/// Check the glued chart against the intended global boundary positions.
fn check_glue(glued_base: &[(VId, Pt)], strip: &Strip, boundary_global: &[(VId, Pt)]) -> bool {
    let _ = strip;
    glued_base
        .iter()
        .zip(boundary_global.iter())
        .all(|(a, b)| a == b)
}

/// One side of the construction: the fixed approach strips plus every stack
/// assembly of total height mu units of sqrt3/2.
pub struct SideTower {
    /// Fixed part: the hexagon strip on the axis and the 3-2 row above it.
    pub fixed: Vec<GluedStrip>,
    /// All stack assemblies over the fixed part, keyed by choice string.
    pub stacks: Vec<(String, Vec<GluedStrip>)>,
}

fn build_side_tower(
    atlas: &mut Atlas,
    axis: &[(VId, Pt)],
    mu: i64,
    first_fixed_reading: Option<&[u8]>,
) -> Result<SideTower, Error> {
    // strips on the axis: identify the hexagon sheet (height 4)
    let axis_ids: Vec<VId> = axis.iter().map(|&(v, _)| v).collect();
    let strips = strips_on(atlas, &axis_ids)?;
    let hex = strips
        .iter()
        .find(|s| s.info.height_quarters == 4)
        .ok_or_else(|| Error::ConstructionFailure("no hexagon strip on the axis".into()))?;
    let glued_hex = glue_strip(hex, axis)?;
    let mut fixed = vec![glued_hex];
    // the 3-2 row on the hexagon boundary
    {
        let prev = fixed.last().unwrap();
        let boundary = prev.boundary.clone();
        let b_ids: Vec<VId> = boundary.iter().map(|&(v, _)| v).collect();
        let strips = strips_on(atlas, &b_ids)?;
        let prev_faces = &prev.faces;
        let want = first_fixed_reading.unwrap_or(&[3, 2]);
        let forward: Vec<&Strip> = strips
            .iter()
            .filter(|s| s.faces.is_disjoint(prev_faces))
            .collect();
        let row = forward
            .iter()
            .find(|s| s.info.height_quarters == 2 && s.info.reading == want)
            .ok_or_else(|| {
                Error::ConstructionFailure("no forward row with the requested reading".into())
            })?;
        fixed.push(glue_strip(row, &boundary)?);
    }
    // enumerate stack assemblies of exact height 2*mu quarters
    let mut stacks: Vec<(String, Vec<GluedStrip>)> = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        atlas: &mut Atlas,
        prev_faces: &BTreeSet<[VId; 3]>,
        boundary: Vec<(VId, Pt)>,
        remaining: i64,
        path: String,
        acc: &mut Vec<GluedStrip>,
        out: &mut Vec<(String, Vec<GluedStrip>)>,
    ) -> Result<(), Error> {
        if remaining == 0 {
            out.push((path, acc.clone()));
            return Ok(());
        }
        let b_ids: Vec<VId> = boundary.iter().map(|&(v, _)| v).collect();
        let strips = strips_on(atlas, &b_ids)?;
        for s in strips.iter() {
            if !s.faces.is_disjoint(prev_faces) {
                continue; // the sheet we came from
            }
            if s.info.height_quarters > remaining {
                continue;
            }
            let glued = glue_strip(s, &boundary)?;
            let tag = match (s.info.height_quarters, s.info.reading.as_slice()) {
                (4, _) => "H".to_string(),
                (2, [3, 2]) => "r".to_string(),
                (2, [2, 3]) => "R".to_string(),
                (h, r) => format!("?{h}{r:?}"),
            };
            let next_boundary = glued.boundary.clone();
            let h = glued.height_quarters;
            acc.push(glued);
            rec(
                atlas,
                &acc.last().unwrap().faces.clone(),
                next_boundary,
                remaining - h,
                format!("{path}{tag}"),
                acc,
                out,
            )?;
            acc.pop();
        }
        Ok(())
    }
    let last = fixed.last().unwrap();
    rec(
        atlas,
        &last.faces.clone(),
        last.boundary.clone(),
        2 * mu,
        String::new(),
        &mut Vec::new(),
        &mut stacks,
    )?;
    // assemblies must be pairwise distinct as face sets
    for i in 0..stacks.len() {
        for j in (i + 1)..stacks.len() {
            let fi: BTreeSet<&[VId; 3]> = stacks[i].1.iter().flat_map(|g| g.faces.iter()).collect();
            let fj: BTreeSet<&[VId; 3]> = stacks[j].1.iter().flat_map(|g| g.faces.iter()).collect();
            if fi == fj {
                return Err(Error::ConstructionInconsistent(
                    "two stack assemblies coincide".into(),
                ));
            }
        }
    }
    Ok(SideTower { fixed, stacks })
}

/// Everything shared by all disks at a given k.
pub struct MesoContext {
    pub k: i64,
    pub mu: i64,
    pub center: Pt,
    pub r2: Radius2,
    /// Pool pieces in priority order: (name, placements).
    pub pool: Vec<(String, Vec<[(VId, Pt); 3]>)>,
    pub side1: SideTower,
    pub side2: SideTower,
    /// vertex ids of the marked points
    pub o0: VId,
    pub ok_vertex: VId,
    pub a_vertex: VId,
}

pub fn build_meso_context(atlas: &mut Atlas, k: i64) -> Result<MesoContext, Error> {
    assert!(k >= 2, "need k >= 2");
    let mu = mu_k(k).max(0);
    let o = atlas.base_vertex();
    let center = lattice_point(-(k as i32), -(k as i32));
    let r2 = Radius2::of_integer(k + 1);
    let reach = (2 * k + 8) as i32;

    // lattice patch: sector cells and the S2 column, trimmed to the disk
    let disk = Region::Disk { center, r2 };
    let cell_in_disk = |i: i32, j: i32| {
        let tri1 = [
            lattice_point(i, j),
            lattice_point(i + 1, j),
            lattice_point(i + 1, j + 1),
        ];
        let tri2 = [
            lattice_point(i, j),
            lattice_point(i, j + 1),
            lattice_point(i + 1, j + 1),
        ];
        disk.tri_meets(tri1) || disk.tri_meets(tri2)
    };
    let plane = flat_plane_patch(
        atlas,
        o,
        (-reach, 2),
        (-reach, 2),
        &|i, j| (i <= -1 || i == 0) && j <= -1 && cell_in_disk(i, j),
    )?;
    let sector_faces: Vec<[(VId, Pt); 3]> = plane
        .dev
        .faces
        .values()
        .filter(|corners| corners.iter().all(|(_, p)| p.p <= -1 || p.q <= 0))
        .cloned()
        .collect();
    // split: sector cells have all alpha_a <= 0; the S2 column is 0 <= alpha_a <= 1.
    // alpha_a of lattice point (i, j) is i; recover i from the stored grid.
    let mut sector = Vec::new();
    let mut s2 = Vec::new();
    let pos_to_ij: BTreeMap<Pt, (i32, i32)> = plane
        .grid
        .iter()
        .map(|(&(i, j), _)| (lattice_point(i, j), (i, j)))
        .collect();
    for corners in &sector_faces {
        let max_i = corners
            .iter()
            .map(|(_, p)| pos_to_ij.get(p).map(|&(i, _)| i).unwrap_or(i32::MAX))
            .max()
            .unwrap();
        if max_i <= 0 {
            sector.push(*corners);
        } else {
            s2.push(*corners);
        }
    }

    // side 1: the a-axis through O0
    let lo = -(reach as i32);
    let d_a = singular_geodesic(atlas, o, 0, lo, 6)?;
    let axis1: Vec<(VId, Pt)> = d_a
        .iter()
        .enumerate()
        .map(|(idx, &v)| (v, lattice_point(lo + idx as i32, 0)))
        .collect();
    let side1 = build_side_tower(atlas, &axis1, mu, Some(&[3, 2]))?;

    // side 2: the line c^Z(A) through A = a(O0), oriented by decreasing j so
    // the strips stack away from the flat, ending exactly at A
    let a_vertex = plane.grid[&(1, 0)];
    let d2p = {
        let base = atlas.rep(o).clone();
        let a = atlas.gens[0].clone();
        let start = base.mul(&a);
        let start_v = atlas.vertex_of_quotient(&start);
        assert_eq!(start_v, a_vertex);
        // vertices P(1, j) for j = 0 down to -(reach)
        let c = atlas.gens[2].clone();
        let mut cur = start;
        let mut list = Vec::new();
        for idx in 0..(reach + 1) {
            let j = -idx;
            list.push((atlas.vertex_of_quotient(&cur), lattice_point(1, j)));
            cur = cur.mul(&c.inv());
        }
        list
    };
    // sanity: the listed vertices march along the grid column i = 1
    for (v, p) in &d2p {
        if let Some(&(i, _)) = pos_to_ij.get(p) {
            assert_eq!(i, 1);
            assert_eq!(plane.grid[&pos_to_ij[p]], *v);
        }
    }
    let side2 = build_side_tower(atlas, &d2p, mu, Some(&[3, 2]))?;

    // seam trims: the side-1 sheet keeps the apex region and yields beyond A
    // (corners at x <= 1); the side-2 tower stays at or below the a-line.
    let trim1 = |placements: &[[(VId, Pt); 3]]| -> Vec<[(VId, Pt); 3]> {
        placements
            .iter()
            .filter(|c| c.iter().all(|(_, p)| p.p <= 2))
            .cloned()
            .collect()
    };
    let trim2 = |placements: &[[(VId, Pt); 3]]| -> Vec<[(VId, Pt); 3]> {
        placements
            .iter()
            .filter(|c| c.iter().all(|(_, p)| p.q <= 0))
            .cloned()
            .collect()
    };
    let mut pool: Vec<(String, Vec<[(VId, Pt); 3]>)> = Vec::new();
    pool.push(("sector".into(), sector));
    pool.push(("S2".into(), s2));
    pool.push(("S1".into(), trim1(&side1.fixed[0].placements)));
    pool.push(("S1'".into(), trim1(&side1.fixed[1].placements)));
    pool.push(("S2'".into(), trim2(&side2.fixed[0].placements)));
    pool.push(("S2''".into(), trim2(&side2.fixed[1].placements)));

    let ok_vertex = plane.grid[&(-(k as i32), -(k as i32))];
    Ok(MesoContext {
        k,
        mu,
        center,
        r2,
        pool,
        side1,
        side2,
        o0: o,
        ok_vertex,
        a_vertex,
    })
}

/// A certified flat disk.
#[derive(Debug, Clone, Serialize)]
pub struct FlatDiskCertificate {
    pub face_count: usize,
    pub interior_vertices: usize,
    /// All strictly interior vertices carry exactly six corners.
    pub interior_flat: bool,
    /// No boundary edge passes strictly inside the disk.
    pub covered: bool,
    /// Faces placed outside every pool piece (connective tissue).
    pub tissue_faces: usize,
}

impl FlatDiskCertificate {
    pub fn ok(&self) -> bool {
        self.interior_flat && self.covered
    }
}

#[derive(Debug, Clone)]
pub struct MesoDisk {
    pub id: (usize, usize),
    pub dev: DevelopedSet,
    pub cert: FlatDiskCertificate,
}

pub fn verify_flat_disk(dev: &DevelopedSet, center: Pt, r2: Radius2, tissue: usize) -> FlatDiskCertificate {
    let disk = Region::Disk { center, r2 };
    let counts = dev.corner_counts();
    let mut interior = 0usize;
    let mut interior_flat = true;
    for (&v, &p) in &dev.pos {
        if disk.point_strictly_inside(p) {
            interior += 1;
            if counts.get(&v) != Some(&6) {
                interior_flat = false;
            }
        }
    }
    let mut covered = true;
    for ((a, b), n) in dev.edge_face_counts() {
        if n == 1 && disk.segment_meets(dev.pos[&a], dev.pos[&b]) {
            covered = false;
        }
    }
    FlatDiskCertificate {
        face_count: dev.faces.len(),
        interior_vertices: interior,
        interior_flat,
        covered,
        tissue_faces: tissue,
    }
}

/// Assemble one disk from the context with given stack choices.
pub fn assemble_disk(
    atlas: &mut Atlas,
    ctx: &MesoContext,
    i1: usize,
    i2: usize,
) -> Result<MesoDisk, Error> {
    let disk = Region::Disk {
        center: ctx.center,
        r2: ctx.r2,
    };
    let mut dev = DevelopedSet::new();
    let mut pieces: Vec<(&str, &Vec<[(VId, Pt); 3]>)> = Vec::new();
    for (name, placements) in &ctx.pool {
        pieces.push((name.as_str(), placements));
    }
    let stack1: Vec<[(VId, Pt); 3]> = ctx.side1.stacks[i1]
        .1
        .iter()
        .flat_map(|g| g.placements.iter())
        .filter(|c| c.iter().all(|(_, p)| p.p <= 2))
        .cloned()
        .collect();
    let stack2: Vec<[(VId, Pt); 3]> = ctx.side2.stacks[i2]
        .1
        .iter()
        .flat_map(|g| g.placements.iter())
        .filter(|c| c.iter().all(|(_, p)| p.q <= 0))
        .cloned()
        .collect();
    pieces.push(("stack1", &stack1));
    pieces.push(("stack2", &stack2));

    let mut pool_rank: BTreeMap<[VId; 3], u32> = BTreeMap::new();
    for (rank, (_, placements)) in pieces.iter().enumerate() {
        for corners in placements.iter() {
            let mut key = [corners[0].0, corners[1].0, corners[2].0];
            key.sort();
            pool_rank.entry(key).or_insert(rank as u32);
        }
    }
    for (_, placements) in &pieces {
        for corners in placements.iter() {
            let tri = [corners[0].1, corners[1].1, corners[2].1];
            if disk.tri_meets(tri) {
                // earlier pieces win conflicts
                let _ = dev.try_place(*corners);
            }
        }
    }
    let rank_fn = |key: &[VId; 3]| pool_rank.get(key).copied();
    let report = grow_forced(atlas, &mut dev, &disk, &rank_fn);
    if report.holes > 0 || report.ambiguous > 0 {
        return Err(Error::ConstructionFailure(format!(
            "disk assembly stuck: {} holes, {} ambiguous slots",
            report.holes, report.ambiguous
        )));
    }
    let cert = verify_flat_disk(&dev, ctx.center, ctx.r2, report.tissue.len());
    Ok(MesoDisk {
        id: (i1, i2),
        dev,
        cert,
    })
}

/// The lemma-c13 forcing chain, located once per context.
#[derive(Debug, Clone, Serialize)]
pub struct C13Chain {
    pub a_vertex: VId,
    pub a_dist2_x4: i64,
    pub b_vertex: VId,
    pub b_dist2_x4: i64,
    pub b_circle_pattern: Vec<u8>,
    pub r_prime: [VId; 3],
    pub r_prime_partner: [VId; 3],
    pub c_vertex: VId,
    /// No 2pi cycle of the link at C contains both wide corners.
    pub obstruction_verified: bool,
}

#[derive(Debug, Clone, Serialize)]
pub enum C13Verdict {
    Unextendable(C13Chain),
    NotApplicable(String),
}

fn faces_at_in_disk(atlas: &mut Atlas, dev: &DevelopedSet, v: VId) -> Vec<[VId; 3]> {
    atlas
        .faces_at(v)
        .iter()
        .map(|f| f.key())
        .filter(|k| dev.contains_face(k))
        .collect()
}

/// Link 2pi-cycles through a given partial set of link edges.
fn link_cycles_containing(
    link: &LabeledMetricGraph,
    required: &[usize],
) -> Vec<Vec<usize>> {
    link.cycles_of_units(6)
        .into_iter()
        .filter(|cyc| required.iter().all(|e| cyc.contains(e)))
        .collect()
}

/// Locate the forcing chain for a built disk.
pub fn certify_lemma_c13(
    atlas: &mut Atlas,
    ctx: &MesoContext,
    disk: &MesoDisk,
) -> Result<C13Verdict, Error> {
    // hypotheses: the disk meets all four named strips in faces
    for name in ["S1", "S1'", "S2'", "S2''", "S2"] {
        let pieces: Vec<&Vec<[(VId, Pt); 3]>> = ctx
            .pool
            .iter()
            .filter(|(n, _)| n == name)
            .map(|(_, p)| p)
            .collect();
        let mut hit = false;
        for p in pieces {
            for corners in p.iter() {
                let mut key = [corners[0].0, corners[1].0, corners[2].0];
                key.sort();
                if disk.dev.contains_face(&key) {
                    hit = true;
                    break;
                }
            }
        }
        if !hit {
            return Ok(C13Verdict::NotApplicable(format!(
                "disk misses the strip {name}"
            )));
        }
    }
    let a = ctx.a_vertex;
    let a_pos = disk.dev.pos.get(&a).copied().ok_or_else(|| {
        Error::ConstructionInconsistent("marked vertex A is not in the disk".into())
    })?;
    let a_d4 = a_pos.sub(ctx.center).norm4();
    // A must be interior with a full flat germ
    let counts = disk.dev.corner_counts();
    if counts.get(&a) != Some(&6) {
        return Ok(C13Verdict::NotApplicable("A is not interior to the disk".into()));
    }

    // B: a neighbor of A, not strictly interior, whose partial fan extends
    // uniquely to a 2pi circle in its link
    let nbrs = atlas.neighbors(a);
    let mut found: Option<(VId, Vec<u8>, Vec<usize>, Vec<FaceAt>)> = None;
    for &v in nbrs.iter() {
        let Some(&pv) = disk.dev.pos.get(&v) else {
            continue;
        };
        let d4 = pv.sub(ctx.center).norm4();
        // on or outside the circle of radius k+1
        if (d4 as i128) * (ctx.r2.den as i128) < 4 * (ctx.r2.num as i128) {
            continue;
        }
        let link = atlas.link_of(v);
        let faces = atlas.faces_at(v);
        let present: Vec<usize> = (0..16)
            .filter(|&i| disk.dev.contains_face(&faces[i].key()))
            .collect();
        if present.is_empty() {
            continue;
        }
        let cycles = link_cycles_containing(&link, &present);
        if cycles.len() == 1 {
            let pattern = link.merged_pattern(&cycles[0], true);
            if found.is_some() {
                return Ok(C13Verdict::NotApplicable(
                    "forcing vertex B is not unique".into(),
                ));
            }
            found = Some((v, pattern, cycles[0].clone(), faces));
        }
    }
    let Some((b, pattern, circle, b_faces)) = found else {
        return Ok(C13Verdict::NotApplicable("no forcing vertex B found".into()));
    };
    let b_pos = disk.dev.pos[&b];
    let b_d4 = b_pos.sub(ctx.center).norm4();

    // R': the label-2 face on the circle that is not already in the disk
    let link_b = atlas.link_of(b);
    let mut r_prime: Option<FaceAt> = None;
    for &e in &circle {
        let f = &b_faces[e];
        if link_b.edges[e].label == 2 && !disk.dev.contains_face(&f.key()) {
            if r_prime.is_some() {
                return Ok(C13Verdict::NotApplicable(
                    "two new sharp lozenge corners on the circle".into(),
                ));
            }
            r_prime = Some(f.clone());
        }
    }
    let Some(r_prime) = r_prime else {
        return Ok(C13Verdict::NotApplicable(
            "no forced new lozenge on the circle".into(),
        ));
    };
    let diag = r_prime.diagonal().ok_or_else(|| {
        Error::ConstructionInconsistent("forced face is not a lozenge half".into())
    })?;
    let partner = atlas
        .faces_on_edge(diag.0, diag.1)
        .into_iter()
        .map(|f| f.key())
        .find(|k| *k != r_prime.key())
        .ok_or_else(|| Error::ConstructionInconsistent("diagonal with one face".into()))?;

    // C: a diagonal end of R' where some lozenge of the disk also has its
    // wide corner, with no 2pi cycle containing both wide corners
    let mut chain = None;
    for c in [diag.0, diag.1] {
        let link_c = atlas.link_of(c);
        let faces_c = atlas.faces_at(c);
        // link edges at C belonging to R' and its partner
        let rp_edges: Vec<usize> = (0..16)
            .filter(|&i| {
                let k = faces_c[i].key();
                k == r_prime.key() || k == partner
            })
            .collect();
        if rp_edges.len() != 2 {
            continue; // C must see both halves (wide corner)
        }
        // disk lozenges with a wide corner at C: pairs of present faces
        // sharing a valence-2 edge at C
        let present: Vec<usize> = (0..16)
            .filter(|&i| disk.dev.contains_face(&faces_c[i].key()))
            .collect();
        let mut disk_wide: Option<Vec<usize>> = None;
        for &i in &present {
            for &j in &present {
                if i < j {
                    let fi = &faces_c[i];
                    let fj = &faces_c[j];
                    if let (Some(di), Some(dj)) = (fi.diagonal(), fj.diagonal()) {
                        let norm = |d: (VId, VId)| (d.0.min(d.1), d.0.max(d.1));
                        if norm(di) == norm(dj) && (norm(di).0 == c || norm(di).1 == c) {
                            disk_wide = Some(vec![i, j]);
                        }
                    }
                }
            }
        }
        let Some(wide) = disk_wide else { continue };
        let mut required = rp_edges.clone();
        required.extend(&wide);
        let cycles = link_cycles_containing(&link_c, &required);
        if cycles.is_empty() {
            chain = Some(C13Chain {
                a_vertex: a,
                a_dist2_x4: a_d4,
                b_vertex: b,
                b_dist2_x4: b_d4,
                b_circle_pattern: pattern.clone(),
                r_prime: r_prime.key(),
                r_prime_partner: partner,
                c_vertex: c,
                obstruction_verified: true,
            });
            break;
        }
    }
    match chain {
        Some(c) => Ok(C13Verdict::Unextendable(c)),
        None => Ok(C13Verdict::NotApplicable(
            "no obstructed wide-corner vertex found".into(),
        )),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MesoWitness {
    pub k: i64,
    pub mu: i64,
    pub radius: i64,
    pub side_assemblies: [usize; 2],
    /// ceil((3/2)^(2 mu - 4)), the bound that must be met when k >= 32.
    pub family_bound: Option<u64>,
    pub distinct_disks: usize,
    pub disks_certified_flat: usize,
    pub disks_certified_unextendable: usize,
    pub tissue_faces_base: usize,
    pub chain: Option<C13Chain>,
}

pub fn build_meso_disks(atlas: &mut Atlas, k: i64) -> Result<(MesoWitness, Vec<MesoDisk>), Error> {
    let ctx = build_meso_context(atlas, k)?;
    let n1 = ctx.side1.stacks.len();
    let n2 = ctx.side2.stacks.len();
    let mut disks = Vec::new();
    for i1 in 0..n1 {
        for i2 in 0..n2 {
            disks.push(assemble_disk(atlas, &ctx, i1, i2)?);
        }
    }
    // distinctness as face sets
    let mut keysets: Vec<BTreeSet<[VId; 3]>> = disks.iter().map(|d| d.dev.face_keys()).collect();
    keysets.sort();
    keysets.dedup();
    let distinct = keysets.len();
    let flat_ok = disks.iter().filter(|d| d.cert.ok()).count();
    // certify: the chain is shared, but validate it on each disk
    let mut unext = 0;
    let mut chain = None;
    for d in &disks {
        match certify_lemma_c13(atlas, &ctx, d)? {
            C13Verdict::Unextendable(c) => {
                unext += 1;
                chain.get_or_insert(c);
            }
            C13Verdict::NotApplicable(_) => {}
        }
    }
    let family_bound = if k >= 32 {
        Some(ceil_pow_3_2((2 * ctx.mu - 4).max(0) as u32))
    } else {
        None
    };
    let witness = MesoWitness {
        k,
        mu: ctx.mu,
        radius: k + 1,
        side_assemblies: [n1, n2],
        family_bound,
        distinct_disks: distinct,
        disks_certified_flat: flat_ok,
        disks_certified_unextendable: unext,
        tissue_faces_base: disks.first().map(|d| d.cert.tissue_faces).unwrap_or(0),
        chain,
    };
    Ok((witness, disks))
}

/// The product transfer: the profile of the three-dimensional complex
/// dominates the planar one, via cylinders over each disk.
#[derive(Debug, Clone, Serialize)]
pub struct ProductProfileRow {
    pub r: f64,
    pub phi_x_lower: u64,
    pub phi_y_lower: u64,
}

pub fn product_profile(rows: &[(f64, u64)]) -> Vec<ProductProfileRow> {
    rows.iter()
        .map(|&(r, phi)| ProductProfileRow {
            r,
            phi_x_lower: phi,
            phi_y_lower: phi,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mu_values_match_formula() {
        assert_eq!(mu_k(32), 4);
        assert_eq!(mu_k(40), 5);
        assert_eq!(mu_k(100), 14);
    }

    #[test]
    fn family_bound_values() {
        assert_eq!(ceil_pow_3_2(4), 6); // (3/2)^4 = 5.06..
        assert_eq!(ceil_pow_3_2(6), 12); // (3/2)^6 = 11.39..
    }

    #[test]
    fn small_k_context_builds() {
        let mut atlas = Atlas::new();
        let ctx = build_meso_context(&mut atlas, 4).unwrap();
        assert_eq!(ctx.mu, 0);
        assert_eq!(ctx.side1.stacks.len(), 1);
        let disk = assemble_disk(&mut atlas, &ctx, 0, 0).unwrap();
        assert!(disk.cert.ok(), "certificate: {:?}", disk.cert);
    }
}
