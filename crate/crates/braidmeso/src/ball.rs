//! Breadth-first enumeration of Cayley balls and the two distance oracles
//! for the quotient.
//!
//! Frontier expansion shards the current sphere across threads and merges
//! candidate sets; the result is independent of scheduling because only
//! set unions and min-distance reductions are involved.

use crate::error::Error;
use crate::garside::BraidElement;
use crate::group::{braid_generators, quotient_generators, ExecMode, GroupElement, GroupTag};
use crate::quotient::QuotientElement;
use std::collections::HashMap;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub const DEFAULT_BUDGET: usize = 5_000_000;

#[derive(Debug, Clone)]
pub struct GroupBall<E: GroupElement> {
    pub tag: GroupTag,
    pub radius: u32,
    pub generators: Vec<E>,
    pub dist: HashMap<E, u32>,
    /// Sphere sizes indexed by distance.
    pub sphere_sizes: Vec<usize>,
}

impl<E: GroupElement> GroupBall<E> {
    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn distance(&self, e: &E) -> Option<u32> {
        self.dist.get(e).copied()
    }

    /// Elements of the sphere of the given radius, canonically ordered.
    pub fn sphere(&self, r: u32) -> Vec<E> {
        let mut v: Vec<E> = self
            .dist
            .iter()
            .filter(|(_, &d)| d == r)
            .map(|(e, _)| e.clone())
            .collect();
        v.sort();
        v
    }

    /// Elements of the closed ball, canonically ordered.
    pub fn elements(&self) -> Vec<E> {
        let mut v: Vec<E> = self.dist.keys().cloned().collect();
        v.sort();
        v
    }
}

pub fn bfs_ball<E: GroupElement>(
    tag: GroupTag,
    gens: Vec<E>,
    radius: u32,
    budget: usize,
    mode: ExecMode,
) -> Result<GroupBall<E>, Error> {
    let mut dist: HashMap<E, u32> = HashMap::new();
    dist.insert(E::identity(), 0);
    let mut frontier: Vec<E> = vec![E::identity()];
    let mut sphere_sizes = vec![1usize];
    for d in 1..=radius {
        let expand = |e: &E| -> Vec<E> { gens.iter().map(|g| e.op(g)).collect() };
        let mut candidates: Vec<E> = match mode {
            #[cfg(feature = "parallel")]
            ExecMode::Parallel => frontier.par_iter().flat_map_iter(|e| expand(e)).collect(),
            _ => frontier.iter().flat_map(|e| expand(e)).collect(),
        };
        match mode {
            #[cfg(feature = "parallel")]
            ExecMode::Parallel => candidates.par_sort_unstable(),
            _ => candidates.sort_unstable(),
        }
        candidates.dedup();
        let mut next = Vec::new();
        for e in candidates {
            if !dist.contains_key(&e) {
                dist.insert(e.clone(), d);
                next.push(e);
                if dist.len() > budget {
                    return Err(Error::ResourceLimit {
                        what: format!("ball enumeration for {tag} at radius {d}"),
                        budget,
                    });
                }
            }
        }
        sphere_sizes.push(next.len());
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    Ok(GroupBall {
        tag,
        radius,
        generators: gens,
        dist,
        sphere_sizes,
    })
}

pub fn enumerate_ball_b4(
    radius: u32,
    budget: usize,
    mode: ExecMode,
) -> Result<GroupBall<BraidElement>, Error> {
    bfs_ball(GroupTag::B4, braid_generators(), radius, budget, mode)
}

pub fn enumerate_ball_g(
    radius: u32,
    budget: usize,
    mode: ExecMode,
) -> Result<GroupBall<QuotientElement>, Error> {
    bfs_ball(GroupTag::G, quotient_generators(), radius, budget, mode)
}

/// Word-length of a quotient element computed from the section: the minimum
/// of the braid lengths of kappa(g) z^k over the finitely many k that can
/// realize it. The length function is convex in the Delta shift, so the
/// window below provably brackets the minimum.
pub fn distance_g_via_section(g: &QuotientElement) -> u32 {
    let kap = g.kappa();
    let ell = kap.canonical_len() as i32;
    let mut best = u32::MAX;
    // shift inf over [-ell-2, +2]; outside the bracket lengths only grow
    for target in -(ell + 2)..=2 {
        let k2 = target - kap.inf;
        if k2.rem_euclid(2) != 0 {
            continue;
        }
        let mut shifted = kap.clone();
        shifted.inf = target;
        best = best.min(shifted.thurston_length());
    }
    best
}

/// BFS distance in the quotient Cayley graph, checked against the section
/// formula. Both must agree; a mismatch is a modeling bug worth a panic.
pub fn distance_g(g: &QuotientElement, ball: &GroupBall<QuotientElement>) -> Option<u32> {
    let bfs = ball.distance(g)?;
    let formula = distance_g_via_section(g);
    assert_eq!(
        bfs, formula,
        "section distance disagrees with BFS for {}",
        g.text_form()
    );
    Some(bfs)
}

/// Newline-delimited cache format with a header carrying the group tag, a
/// hash of the generator set, and the radius.
pub mod cache {
    use super::*;
    use sha2::{Digest, Sha256};
    use std::io::{BufRead, Write};

    pub fn genset_hash<E: GroupElement>(gens: &[E]) -> String {
        let mut h = Sha256::new();
        for g in gens {
            h.update(g.text_form().as_bytes());
            h.update(b"\n");
        }
        hex_prefix(&h.finalize())
    }

    fn hex_prefix(bytes: &[u8]) -> String {
        bytes[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn write_ball<E: GroupElement, W: Write>(
        ball: &GroupBall<E>,
        mut w: W,
    ) -> std::io::Result<()> {
        let mut body = String::new();
        for e in ball.elements() {
            body.push_str(&format!("{}\t{}\n", e.text_form(), ball.dist[&e]));
        }
        let mut h = Sha256::new();
        h.update(body.as_bytes());
        writeln!(
            w,
            "# braidmeso-ball v1 group={} genset={} radius={} n={} checksum={}",
            ball.tag,
            genset_hash(&ball.generators),
            ball.radius,
            ball.len(),
            hex_prefix(&h.finalize()),
        )?;
        w.write_all(body.as_bytes())
    }

    pub fn read_ball<E: GroupElement, R: BufRead>(
        tag: GroupTag,
        gens: Vec<E>,
        r: R,
    ) -> Result<GroupBall<E>, Error> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Cache("empty cache file".into()))??;
        let fields: HashMap<&str, &str> = header
            .split_whitespace()
            .filter_map(|t| t.split_once('='))
            .collect();
        let want_tag = fields
            .get("group")
            .ok_or_else(|| Error::Cache("missing group tag".into()))?;
        if *want_tag != tag.to_string() {
            return Err(Error::Cache(format!("cache is for group {want_tag}")));
        }
        if fields.get("genset") != Some(&genset_hash(&gens).as_str()) {
            return Err(Error::Cache("generator set hash mismatch".into()));
        }
        let radius: u32 = fields
            .get("radius")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Cache("bad radius".into()))?;
        let checksum = fields
            .get("checksum")
            .map(|s| s.to_string())
            .ok_or_else(|| Error::Cache("missing checksum".into()))?;
        let mut body = String::new();
        let mut dist = HashMap::new();
        let mut max_d = 0;
        for line in lines {
            let line = line?;
            body.push_str(&line);
            body.push('\n');
            let (text, d) = line
                .split_once('\t')
                .ok_or_else(|| Error::Cache("bad record".into()))?;
            let e = E::from_text(text).ok_or_else(|| Error::Cache("bad element".into()))?;
            let d: u32 = d.parse().map_err(|_| Error::Cache("bad distance".into()))?;
            max_d = max_d.max(d);
            dist.insert(e, d);
        }
        let mut h = Sha256::new();
        h.update(body.as_bytes());
        if hex_prefix(&h.finalize()) != checksum {
            return Err(Error::Cache("checksum mismatch".into()));
        }
        let mut sphere_sizes = vec![0usize; max_d as usize + 1];
        for &d in dist.values() {
            sphere_sizes[d as usize] += 1;
        }
        Ok(GroupBall {
            tag,
            radius,
            generators: gens,
            dist,
            sphere_sizes,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::garside::normalize_str;
    use crate::quotient::project;

    #[test]
    fn ball_zero_is_identity() {
        let b = enumerate_ball_b4(0, 1000, ExecMode::Sequential).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b.distance(&BraidElement::identity()), Some(0));
    }

    #[test]
    fn ball_one_has_47_elements() {
        let b = enumerate_ball_b4(1, 10_000, ExecMode::Sequential).unwrap();
        assert_eq!(b.len(), 47);
        assert_eq!(b.sphere_sizes, vec![1, 46]);
    }

    #[test]
    fn balls_are_inverse_closed() {
        let b = enumerate_ball_b4(2, 100_000, ExecMode::default()).unwrap();
        for (e, &d) in &b.dist {
            assert_eq!(b.distance(&e.inverse()), Some(d));
        }
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let s = enumerate_ball_g(2, 100_000, ExecMode::Sequential).unwrap();
        let p = enumerate_ball_g(2, 100_000, ExecMode::Parallel).unwrap();
        assert_eq!(s.dist, p.dist);
    }

    #[test]
    fn section_distance_agrees_with_bfs_on_radius_two() {
        let b = enumerate_ball_g(2, 100_000, ExecMode::default()).unwrap();
        for e in b.elements() {
            distance_g(&e, &b).unwrap();
        }
    }

    #[test]
    fn quotient_distance_never_exceeds_braid_length() {
        let b = enumerate_ball_b4(2, 100_000, ExecMode::default()).unwrap();
        let bg = enumerate_ball_g(2, 100_000, ExecMode::default()).unwrap();
        for e in b.sphere(2) {
            let q = project(&e);
            assert!(bg.distance(&q).unwrap_or(2) <= 2);
        }
        let delta = project(&normalize_str("bacbac").unwrap());
        assert_eq!(bg.distance(&delta), Some(1));
    }

    #[test]
    fn cache_round_trip() {
        let b = enumerate_ball_g(1, 10_000, ExecMode::Sequential).unwrap();
        let mut buf = Vec::new();
        cache::write_ball(&b, &mut buf).unwrap();
        let b2 =
            cache::read_ball(GroupTag::G, quotient_generators(), buf.as_slice()).unwrap();
        assert_eq!(b.dist, b2.dist);
    }
}
