use braidmeso::brady::Atlas;
use braidmeso::flats::{grow_forced, DevelopedSet, Region};
use braidmeso::meso::*;
use std::collections::BTreeMap;

fn main() {
    let mut atlas = Atlas::new();
    let k = 4i64;
    let ctx = build_meso_context(&mut atlas, k).unwrap();
    println!("mu = {}, stacks = {} x {}", ctx.mu, ctx.side1.stacks.len(), ctx.side2.stacks.len());
    for (name, p) in &ctx.pool {
        println!("pool {name}: {} faces", p.len());
    }
    // replicate assemble_disk with diagnostics
    let disk = Region::Disk { center: ctx.center, r2: ctx.r2 };
    let mut dev = DevelopedSet::new();
    let mut pool_rank: BTreeMap<[u32; 3], u32> = BTreeMap::new();
    let mut skipped = 0;
    for (rank, (name, placements)) in ctx.pool.iter().enumerate() {
        for corners in placements.iter() {
            let mut key = [corners[0].0, corners[1].0, corners[2].0];
            key.sort();
            pool_rank.entry(key).or_insert(rank as u32);
            let tri = [corners[0].1, corners[1].1, corners[2].1];
            if disk.tri_meets(tri) {
                use braidmeso::flats::InsertOutcome;
                if dev.try_place(*corners) == InsertOutcome::Conflict {
                    skipped += 1;
                    println!("conflict inserting {name} face {:?} at {:?}", key, tri);
                }
            }
        }
    }
    println!("pre-inserted {} faces, skipped {}", dev.faces.len(), skipped);
    let rank_fn = |key: &[u32; 3]| pool_rank.get(key).copied();
    let report = grow_forced(&mut atlas, &mut dev, &disk, &rank_fn);
    println!("grow: placed {} tissue {} ambiguous {} holes {}",
        report.placed, report.tissue.len(), report.ambiguous, report.holes);
    // find the holes and print their geometry
    use braidmeso::geom::Pt;
    let o_pos: Pt = ctx.center;
    println!("center at {:?} (real {:?})", o_pos, o_pos.as_f64());
    for ((a, b), n) in dev.edge_face_counts() {
        if n == 1 {
            let pa = dev.pos[&a];
            let pb = dev.pos[&b];
            if disk.segment_meets(pa, pb) {
                println!("open boundary edge {a}-{b} at {:?} - {:?} (real {:?} {:?})",
                    pa, pb, pa.as_f64(), pb.as_f64());
            }
        }
    }
}
