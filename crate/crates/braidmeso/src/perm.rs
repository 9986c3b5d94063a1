//! Permutations of four strands and the lookup tables driving the Garside
//! engine.
//!
//! Simple elements of the positive braid monoid are in bijection with the 24
//! permutations of {1,2,3,4}. Every product, meet and complement the normal
//! form needs reduces to finite table lookups computed once at startup. The
//! fixed total order on simples is the Lehmer-code (lexicographic) order of
//! one-line notation, which doubles as the canonical tie-breaker everywhere.

use once_cell::sync::Lazy;

/// Index of a permutation of {0,1,2,3} in lexicographic (Lehmer) order.
pub type PermIdx = u8;

pub const N_PERMS: usize = 24;
/// Index of the identity permutation.
pub const IDENTITY: PermIdx = 0;

/// `MULT[p][q]` is "apply p, then q": the image of a word concatenation.
fn mult_arr(p: [u8; 4], q: [u8; 4]) -> [u8; 4] {
    [
        q[p[0] as usize],
        q[p[1] as usize],
        q[p[2] as usize],
        q[p[3] as usize],
    ]
}

fn inv_arr(p: [u8; 4]) -> [u8; 4] {
    let mut r = [0u8; 4];
    for i in 0..4 {
        r[p[i] as usize] = i as u8;
    }
    r
}

fn inversions(p: [u8; 4]) -> u8 {
    let mut n = 0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            if p[i] > p[j] {
                n += 1;
            }
        }
    }
    n
}

pub struct Tables {
    /// One-line notation for each index, lexicographically sorted.
    pub perms: [[u8; 4]; N_PERMS],
    pub mult: [[PermIdx; N_PERMS]; N_PERMS],
    pub inv: [PermIdx; N_PERMS],
    /// Coxeter length = number of inversions = letters of any reduced word.
    pub len: [u8; N_PERMS],
    /// The half twist: the order-reversing permutation.
    pub w0: PermIdx,
    /// Right complement: `mult(s, comp[s]) = w0`.
    pub comp: [PermIdx; N_PERMS],
    /// Conjugation by the half twist (an involution on simples).
    pub tau: [PermIdx; N_PERMS],
    /// `left_div[u]` is a bitmask over v: does the simple of u left-divide v.
    pub left_div: [u32; N_PERMS],
    /// Left gcd in the permutation lattice (weak order meet).
    pub meet: [[PermIdx; N_PERMS]; N_PERMS],
    /// Artin generator images: `gen_perm[i]` is the transposition (i, i+1).
    pub gen_perm: [PermIdx; 3],
}

impl Tables {
    pub fn index_of(&self, p: [u8; 4]) -> PermIdx {
        // Lehmer rank; avoids a hash map for a hot lookup.
        let mut rank = 0usize;
        let mut seen = [false; 4];
        for i in 0..4 {
            let smaller = (0..p[i]).filter(|&j| !seen[j as usize]).count();
            rank += smaller * [6, 2, 1, 1][i];
            seen[p[i] as usize] = true;
        }
        rank as PermIdx
    }

    #[inline]
    pub fn mul(&self, a: PermIdx, b: PermIdx) -> PermIdx {
        self.mult[a as usize][b as usize]
    }

    #[inline]
    pub fn left_divides(&self, u: PermIdx, v: PermIdx) -> bool {
        self.left_div[u as usize] & (1 << v) != 0
    }

    /// A reduced word for the simple with this permutation, as generator
    /// indices in 0..3 (sigma_1, sigma_2, sigma_3), reading left to right.
    pub fn reduced_word(&self, mut p: PermIdx) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.len[p as usize] as usize);
        while p != IDENTITY {
            let mut found = false;
            for g in 0..3 {
                let q = self.mul(self.gen_perm[g], p);
                if self.len[q as usize] + 1 == self.len[p as usize] {
                    out.push(g as u8);
                    p = q;
                    found = true;
                    break;
                }
            }
            debug_assert!(found, "no left descent on a non-identity permutation");
        }
        out
    }
}

pub static TABLES: Lazy<Tables> = Lazy::new(|| {
    let mut perms = [[0u8; 4]; N_PERMS];
    let mut items: Vec<[u8; 4]> = Vec::with_capacity(24);
    let base = [0u8, 1, 2, 3];
    // lexicographic enumeration
    fn rec(prefix: &mut Vec<u8>, rest: &mut Vec<u8>, out: &mut Vec<[u8; 4]>) {
        if rest.is_empty() {
            out.push([prefix[0], prefix[1], prefix[2], prefix[3]]);
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            prefix.push(v);
            rec(prefix, rest, out);
            prefix.pop();
            rest.insert(i, v);
        }
    }
    rec(&mut Vec::new(), &mut base.to_vec(), &mut items);
    perms.copy_from_slice(&items);

    let idx = |p: [u8; 4]| items.iter().position(|&q| q == p).unwrap() as PermIdx;

    let mut mult = [[0; N_PERMS]; N_PERMS];
    let mut inv = [0; N_PERMS];
    let mut len = [0; N_PERMS];
    for a in 0..N_PERMS {
        inv[a] = idx(inv_arr(perms[a]));
        len[a] = inversions(perms[a]);
        for b in 0..N_PERMS {
            mult[a][b] = idx(mult_arr(perms[a], perms[b]));
        }
    }
    let w0 = idx([3, 2, 1, 0]);

    let mut comp = [0; N_PERMS];
    let mut tau = [0; N_PERMS];
    for a in 0..N_PERMS {
        comp[a] = mult[inv[a] as usize][w0 as usize];
        tau[a] = mult[mult[w0 as usize][a as usize] as usize][w0 as usize];
    }

    // left weak order: u <= v iff len(u) + len(u^-1 v) = len(v)
    let mut left_div = [0u32; N_PERMS];
    for u in 0..N_PERMS {
        for v in 0..N_PERMS {
            let q = mult[inv[u] as usize][v];
            if len[u] + len[q as usize] == len[v] {
                left_div[u] |= 1 << v;
            }
        }
    }

    // meets: the unique maximal common left divisor
    let mut meet = [[0; N_PERMS]; N_PERMS];
    for a in 0..N_PERMS {
        for b in 0..N_PERMS {
            let common: Vec<PermIdx> = (0..N_PERMS as PermIdx)
                .filter(|&u| {
                    left_div[u as usize] & (1 << a) != 0 && left_div[u as usize] & (1 << b) != 0
                })
                .collect();
            let mut best: Option<PermIdx> = None;
            for &u in &common {
                if common.iter().all(|&w| left_div[w as usize] & (1 << u) != 0) {
                    assert!(best.is_none(), "weak order meet is not unique");
                    best = Some(u);
                }
            }
            meet[a][b] = best.expect("weak order has a meet");
        }
    }

    let gen_perm = [idx([1, 0, 2, 3]), idx([0, 2, 1, 3]), idx([0, 1, 3, 2])];

    Tables {
        perms,
        mult,
        inv,
        len,
        w0,
        comp,
        tau,
        left_div,
        meet,
        gen_perm,
    }
});

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_index_zero() {
        assert_eq!(TABLES.perms[0], [0, 1, 2, 3]);
        assert_eq!(TABLES.len[0], 0);
    }

    #[test]
    fn w0_reverses_and_has_length_six() {
        let t = &*TABLES;
        assert_eq!(t.perms[t.w0 as usize], [3, 2, 1, 0]);
        assert_eq!(t.len[t.w0 as usize], 6);
    }

    #[test]
    fn index_of_agrees_with_enumeration() {
        let t = &*TABLES;
        for i in 0..N_PERMS {
            assert_eq!(t.index_of(t.perms[i]) as usize, i);
        }
    }

    #[test]
    fn complement_completes_to_half_twist() {
        let t = &*TABLES;
        for s in 0..N_PERMS as PermIdx {
            assert_eq!(t.mul(s, t.comp[s as usize]), t.w0);
            assert_eq!(
                t.len[s as usize] + t.len[t.comp[s as usize] as usize],
                t.len[t.w0 as usize]
            );
        }
    }

    #[test]
    fn tau_is_an_involution_preserving_length() {
        let t = &*TABLES;
        for s in 0..N_PERMS {
            let ts = t.tau[s];
            assert_eq!(t.tau[ts as usize], s as PermIdx);
            assert_eq!(t.len[ts as usize], t.len[s]);
        }
    }

    #[test]
    fn meet_is_a_lower_bound() {
        let t = &*TABLES;
        for a in 0..N_PERMS as PermIdx {
            for b in 0..N_PERMS as PermIdx {
                let m = t.meet[a as usize][b as usize];
                assert!(t.left_divides(m, a));
                assert!(t.left_divides(m, b));
            }
        }
    }

    #[test]
    fn reduced_words_multiply_back() {
        let t = &*TABLES;
        for s in 0..N_PERMS as PermIdx {
            let w = t.reduced_word(s);
            assert_eq!(w.len(), t.len[s as usize] as usize);
            let mut p = IDENTITY;
            for g in w {
                p = t.mul(p, t.gen_perm[g as usize]);
            }
            assert_eq!(p, s);
        }
    }
}
