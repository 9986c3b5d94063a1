//! Left-greedy Garside normal forms for the 4-string braid group.
//!
//! An element is stored as `Delta^inf * f_1 ... f_k` where every factor is a
//! proper simple (neither trivial nor the half twist) and adjacent factors
//! are left-weighted. This representation is unique, so structural equality
//! is group equality and the type can sit in hash maps as-is.
//!
//! Inverse letters are folded into the positive monoid with the tau twist:
//! conjugation by the half twist permutes simples, so a trailing `Delta^-1`
//! can always be pushed to the front.

use crate::perm::{PermIdx, Tables, IDENTITY, TABLES};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use std::fmt;

/// Artin generators a, b, c (sigma_1..sigma_3) with a sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Letter {
    pub gen: u8, // 0=a, 1=b, 2=c
    pub inverse: bool,
}

/// A free word over the Artin generators, as parsed from text.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ArtinWord(pub Vec<Letter>);

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum WordParseError {
    #[error("invalid character {0:?} in braid word (expected a, b, c, A, B, C)")]
    BadChar(char),
}

impl ArtinWord {
    pub fn parse(s: &str) -> Result<Self, WordParseError> {
        let mut letters = Vec::with_capacity(s.len());
        for ch in s.chars() {
            if ch.is_whitespace() || ch == '(' || ch == ')' {
                continue;
            }
            let (gen, inverse) = match ch {
                'a' => (0, false),
                'b' => (1, false),
                'c' => (2, false),
                'A' => (0, true),
                'B' => (1, true),
                'C' => (2, true),
                other => return Err(WordParseError::BadChar(other)),
            };
            letters.push(Letter { gen, inverse });
        }
        Ok(ArtinWord(letters))
    }

    pub fn inverse(&self) -> ArtinWord {
        ArtinWord(
            self.0
                .iter()
                .rev()
                .map(|l| Letter {
                    gen: l.gen,
                    inverse: !l.inverse,
                })
                .collect(),
        )
    }
}

impl fmt::Display for ArtinWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            let ch = match (l.gen, l.inverse) {
                (0, false) => 'a',
                (1, false) => 'b',
                (2, false) => 'c',
                (0, true) => 'A',
                (1, true) => 'B',
                _ => 'C',
            };
            write!(f, "{ch}")?;
        }
        Ok(())
    }
}

pub type FactorVec = SmallVec<[PermIdx; 8]>;

/// Canonical left-greedy form. Ordering is the fixed total order used for
/// canonical tie-breaking throughout: (inf, factor count, factor sequence).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BraidElement {
    pub inf: i32,
    pub factors: FactorVec,
}

impl BraidElement {
    pub fn identity() -> Self {
        BraidElement {
            inf: 0,
            factors: FactorVec::new(),
        }
    }

    /// The half twist Delta = (bac)^2.
    pub fn delta() -> Self {
        BraidElement {
            inf: 1,
            factors: FactorVec::new(),
        }
    }

    /// The central generator z = Delta^2 = (bac)^4.
    pub fn central_z() -> Self {
        BraidElement {
            inf: 2,
            factors: FactorVec::new(),
        }
    }

    pub fn delta_power(p: i32) -> Self {
        BraidElement {
            inf: p,
            factors: FactorVec::new(),
        }
    }

    /// The simple element with the given permutation.
    pub fn simple(p: PermIdx) -> Self {
        let t = &*TABLES;
        if p == IDENTITY {
            Self::identity()
        } else if p == t.w0 {
            Self::delta()
        } else {
            BraidElement {
                inf: 0,
                factors: FactorVec::from_slice(&[p]),
            }
        }
    }

    pub fn is_identity(&self) -> bool {
        self.inf == 0 && self.factors.is_empty()
    }

    /// Number of proper simple factors (canonical length).
    pub fn canonical_len(&self) -> usize {
        self.factors.len()
    }

    /// sup = inf + canonical length.
    pub fn sup(&self) -> i32 {
        self.inf + self.factors.len() as i32
    }

    pub fn is_positive(&self) -> bool {
        self.inf >= 0
    }

    /// Geodesic word length over the simples and their inverses.
    pub fn thurston_length(&self) -> u32 {
        let sup = self.sup();
        (sup.max(0) - self.inf.min(0)) as u32
    }

    /// The permutation of strand endpoints.
    pub fn underlying_permutation(&self) -> PermIdx {
        let t = &*TABLES;
        let mut p = IDENTITY;
        let w0_pow = self.inf.rem_euclid(2);
        if w0_pow == 1 {
            p = t.w0;
        }
        for &f in &self.factors {
            p = t.mul(p, f);
        }
        p
    }

    pub fn is_pure(&self) -> bool {
        self.underlying_permutation() == IDENTITY
    }

    /// Canonical interchange form `D^p:s1.s2...` with simples in one-line
    /// permutation notation (1-based), e.g. `D^-1:2134.1243`.
    pub fn text_form(&self) -> String {
        let t = &*TABLES;
        let mut s = format!("D^{}:", self.inf);
        for (i, &f) in self.factors.iter().enumerate() {
            if i > 0 {
                s.push('.');
            }
            for &v in &t.perms[f as usize] {
                s.push(char::from(b'1' + v));
            }
        }
        s
    }

    pub fn from_text(s: &str) -> Option<Self> {
        let rest = s.strip_prefix("D^")?;
        let (p, factors) = rest.split_once(':')?;
        let inf: i32 = p.parse().ok()?;
        let t = &*TABLES;
        let mut fs = FactorVec::new();
        if !factors.is_empty() {
            for part in factors.split('.') {
                let bytes = part.as_bytes();
                if bytes.len() != 4 {
                    return None;
                }
                let mut arr = [0u8; 4];
                for i in 0..4 {
                    let v = bytes[i].checked_sub(b'1')?;
                    if v > 3 {
                        return None;
                    }
                    arr[i] = v;
                }
                fs.push(t.index_of(arr));
            }
        }
        let el = BraidElement { inf, factors: fs };
        // refuse non-canonical text
        let renorm = normalize_factor_sequence(el.inf, el.factors.clone());
        if renorm == el {
            Some(el)
        } else {
            None
        }
    }
}

/// Left-weight a factor sequence in place and strip Delta / identity factors.
pub(crate) fn normalize_factor_sequence(mut inf: i32, mut fs: FactorVec) -> BraidElement {
    let t = &*TABLES;
    loop {
        fs.retain(|f| *f != IDENTITY);
        let mut changed = false;
        for i in 0..fs.len().saturating_sub(1) {
            let s = fs[i];
            let u = fs[i + 1];
            if s == t.w0 || u == IDENTITY {
                continue;
            }
            let r = t.meet[t.comp[s as usize] as usize][u as usize];
            if r != IDENTITY {
                fs[i] = t.mul(s, r);
                fs[i + 1] = t.mul(t.inv[r as usize], u);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    // collect leading half twists; slides have already pushed them left
    let mut start = 0;
    while start < fs.len() && fs[start] == t.w0 {
        start += 1;
    }
    inf += start as i32;
    let out = FactorVec::from_slice(&fs[start..]);
    debug_assert!(out.iter().all(|&f| f != t.w0 && f != IDENTITY));
    BraidElement { inf, factors: out }
}

fn tau_shift(t: &Tables, fs: &FactorVec, power: i32) -> FactorVec {
    if power.rem_euclid(2) == 0 {
        fs.clone()
    } else {
        fs.iter().map(|&f| t.tau[f as usize]).collect()
    }
}

pub fn multiply(x: &BraidElement, y: &BraidElement) -> BraidElement {
    let t = &*TABLES;
    let inf = x.inf + y.inf;
    let mut fs = tau_shift(t, &x.factors, y.inf);
    fs.extend_from_slice(&y.factors);
    normalize_factor_sequence(inf, fs)
}

pub fn invert(x: &BraidElement) -> BraidElement {
    let t = &*TABLES;
    // (D^p f1..fk)^-1 = fk^-1 .. f1^-1 D^-p; each fi^-1 = D^-1 * tau(comp(fi)).
    let mut acc = BraidElement::identity();
    for &f in x.factors.iter().rev() {
        let piece = BraidElement {
            inf: -1,
            factors: FactorVec::from_slice(&[t.tau[t.comp[f as usize] as usize]]),
        };
        acc = multiply(&acc, &piece);
    }
    acc = multiply(&acc, &BraidElement::delta_power(-x.inf));
    acc
}

/// Normalize a free word into the canonical form.
pub fn normalize(w: &ArtinWord) -> BraidElement {
    let t = &*TABLES;
    let mut inf = 0i32;
    let mut fs = FactorVec::new();
    for l in &w.0 {
        let g = t.gen_perm[l.gen as usize];
        if !l.inverse {
            fs.push(g);
        } else {
            // x * sigma^-1 = Delta^-1 * tau(x-factors) * (Delta sigma^-1)
            for f in fs.iter_mut() {
                *f = t.tau[*f as usize];
            }
            inf -= 1;
            fs.push(t.mul(t.w0, g));
        }
        if fs.len() > 64 {
            let b = normalize_factor_sequence(inf, std::mem::take(&mut fs));
            inf = b.inf;
            fs = b.factors;
        }
    }
    normalize_factor_sequence(inf, fs)
}

pub fn normalize_str(s: &str) -> Result<BraidElement, WordParseError> {
    Ok(normalize(&ArtinWord::parse(s)?))
}

/// Raise to an integer power by repeated squaring.
pub fn power(x: &BraidElement, n: i32) -> BraidElement {
    if n == 0 {
        return BraidElement::identity();
    }
    let base = if n < 0 { invert(x) } else { x.clone() };
    let mut e = n.unsigned_abs();
    let mut acc = BraidElement::identity();
    let mut sq = base;
    while e > 0 {
        if e & 1 == 1 {
            acc = multiply(&acc, &sq);
        }
        sq = multiply(&sq, &sq);
        e >>= 1;
    }
    acc
}

/// Thurston mixed form: x = (s_1 ... s_n)^-1 t_1 ... t_m with the two
/// positive parts coprime on the left. Factor lists are greedy forms with
/// half twists written out explicitly, so n + m is the geodesic length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedForm {
    /// Greedy factors of the denominator s (so the element starts with the
    /// inverses of these, read right to left).
    pub neg: Vec<PermIdx>,
    /// Greedy factors of the numerator t.
    pub pos: Vec<PermIdx>,
}

impl MixedForm {
    pub fn length(&self) -> u32 {
        (self.neg.len() + self.pos.len()) as u32
    }
}

/// Greedy factors of a positive element with Delta factors expanded.
fn positive_factors(x: &BraidElement) -> Vec<PermIdx> {
    assert!(x.inf >= 0, "positive_factors needs a positive element");
    let t = &*TABLES;
    let mut out = Vec::with_capacity(x.inf as usize + x.factors.len());
    for _ in 0..x.inf {
        out.push(t.w0);
    }
    out.extend_from_slice(&x.factors);
    out
}

/// First greedy factor of a positive element (identity if trivial).
fn initial_factor(x: &BraidElement) -> PermIdx {
    let t = &*TABLES;
    if x.inf > 0 {
        t.w0
    } else {
        x.factors.first().copied().unwrap_or(IDENTITY)
    }
}

/// Left gcd of two positive elements.
pub fn left_gcd(a: &BraidElement, b: &BraidElement) -> BraidElement {
    assert!(a.inf >= 0 && b.inf >= 0);
    let t = &*TABLES;
    let mut a = a.clone();
    let mut b = b.clone();
    let mut d = BraidElement::identity();
    loop {
        let r = t.meet[initial_factor(&a) as usize][initial_factor(&b) as usize];
        if r == IDENTITY {
            return d;
        }
        let r_el = BraidElement::simple(r);
        let r_inv = invert(&r_el);
        d = multiply(&d, &r_el);
        a = multiply(&r_inv, &a);
        b = multiply(&r_inv, &b);
    }
}

pub fn mixed_form(x: &BraidElement) -> MixedForm {
    if x.inf >= 0 {
        return MixedForm {
            neg: Vec::new(),
            pos: positive_factors(x),
        };
    }
    let q = -x.inf;
    let f_part = BraidElement {
        inf: 0,
        factors: x.factors.clone(),
    };
    let delta_q = BraidElement::delta_power(q);
    let d = left_gcd(&delta_q, &f_part);
    let d_inv = invert(&d);
    let s = multiply(&d_inv, &delta_q);
    let t_el = multiply(&d_inv, &f_part);
    debug_assert!(left_gcd(&s, &t_el).is_identity());
    debug_assert_eq!(multiply(&invert(&s), &t_el), *x);
    MixedForm {
        neg: positive_factors(&s),
        pos: positive_factors(&t_el),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn nf(s: &str) -> BraidElement {
        normalize_str(s).unwrap()
    }

    #[test]
    fn braid_relations_hold() {
        assert_eq!(nf("aba"), nf("bab"));
        assert_eq!(nf("bcb"), nf("cbc"));
        assert_eq!(nf("ac"), nf("ca"));
        assert_ne!(nf("ab"), nf("ba"));
    }

    #[test]
    fn empty_word_is_identity() {
        let e = nf("");
        assert!(e.is_identity());
        assert_eq!(e.inf, 0);
        assert!(e.factors.is_empty());
    }

    #[test]
    fn half_twist_and_center() {
        let delta = nf("bacbac");
        assert_eq!(delta, BraidElement::delta());
        let z = nf("bacbacbacbac");
        assert_eq!(z.inf, 2);
        assert!(z.factors.is_empty());
    }

    #[test]
    fn trivial_word_from_relation() {
        assert!(nf("abaBAB").is_identity());
    }

    #[test]
    fn multiply_matches_concatenation() {
        let x = nf("b");
        let y = nf("ac");
        assert_eq!(multiply(&x, &y), nf("bac"));
    }

    #[test]
    fn inverse_of_bac_to_the_fourth_is_z_inverse() {
        let inv_bac = invert(&nf("bac"));
        let p = power(&inv_bac, 4);
        assert_eq!(p, BraidElement::delta_power(-2));
    }

    #[test]
    fn normalize_is_homomorphic_on_random_words() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                let n = rng.gen_range(0..40);
                ArtinWord(
                    (0..n)
                        .map(|_| Letter {
                            gen: rng.gen_range(0..3),
                            inverse: rng.gen_bool(0.5),
                        })
                        .collect(),
                )
            };
            let u = mk(&mut rng);
            let v = mk(&mut rng);
            let mut uv = u.clone();
            uv.0.extend_from_slice(&v.0);
            assert_eq!(normalize(&uv), multiply(&normalize(&u), &normalize(&v)));
        }
    }

    #[test]
    fn inverse_cancels() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.gen_range(0..30);
            let w = ArtinWord(
                (0..n)
                    .map(|_| Letter {
                        gen: rng.gen_range(0..3),
                        inverse: rng.gen_bool(0.5),
                    })
                    .collect(),
            );
            let x = normalize(&w);
            assert!(multiply(&x, &invert(&x)).is_identity());
            assert_eq!(normalize(&w.inverse()), invert(&x));
        }
    }

    #[test]
    fn delta_permutation_reverses_strands() {
        let t = &*TABLES;
        let delta = nf("bacbac");
        assert_eq!(delta.underlying_permutation(), t.w0);
        let z = nf("bacbacbacbac");
        assert_eq!(z.underlying_permutation(), IDENTITY);
    }

    #[test]
    fn z_is_central_on_random_elements() {
        let z = BraidElement::central_z();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let n = rng.gen_range(0..25);
            let w = ArtinWord(
                (0..n)
                    .map(|_| Letter {
                        gen: rng.gen_range(0..3),
                        inverse: rng.gen_bool(0.5),
                    })
                    .collect(),
            );
            let x = normalize(&w);
            assert_eq!(multiply(&z, &x), multiply(&x, &z));
        }
    }

    #[test]
    fn mixed_form_of_identity_and_simples() {
        let e = BraidElement::identity();
        let m = mixed_form(&e);
        assert!(m.neg.is_empty() && m.pos.is_empty());
        assert_eq!(e.thurston_length(), 0);

        for s in 1..crate::perm::N_PERMS as PermIdx {
            let x = BraidElement::simple(s);
            let m = mixed_form(&x);
            assert!(m.neg.is_empty());
            assert_eq!(m.pos, vec![s]);
            assert_eq!(x.thurston_length(), 1);
        }
    }

    #[test]
    fn mixed_form_length_matches_formula() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let n = rng.gen_range(0..30);
            let w = ArtinWord(
                (0..n)
                    .map(|_| Letter {
                        gen: rng.gen_range(0..3),
                        inverse: rng.gen_bool(0.5),
                    })
                    .collect(),
            );
            let x = normalize(&w);
            let m = mixed_form(&x);
            assert_eq!(m.length(), x.thurston_length());
            // coprimality of the two positive parts
            let s = m
                .neg
                .iter()
                .fold(BraidElement::identity(), |acc, &f| {
                    multiply(&acc, &BraidElement::simple(f))
                });
            let t = m
                .pos
                .iter()
                .fold(BraidElement::identity(), |acc, &f| {
                    multiply(&acc, &BraidElement::simple(f))
                });
            assert!(left_gcd(&s, &t).is_identity());
            assert_eq!(multiply(&invert(&s), &t), x);
        }
    }

    #[test]
    fn subadditivity_of_length() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..300 {
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                let n = rng.gen_range(0..25);
                normalize(&ArtinWord(
                    (0..n)
                        .map(|_| Letter {
                            gen: rng.gen_range(0..3),
                            inverse: rng.gen_bool(0.5),
                        })
                        .collect(),
                ))
            };
            let x = mk(&mut rng);
            let y = mk(&mut rng);
            assert!(
                multiply(&x, &y).thurston_length() <= x.thurston_length() + y.thurston_length()
            );
        }
    }

    #[test]
    fn text_form_round_trips() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let n = rng.gen_range(0..20);
            let w = ArtinWord(
                (0..n)
                    .map(|_| Letter {
                        gen: rng.gen_range(0..3),
                        inverse: rng.gen_bool(0.5),
                    })
                    .collect(),
            );
            let x = normalize(&w);
            assert_eq!(BraidElement::from_text(&x.text_form()).unwrap(), x);
        }
        assert_eq!(BraidElement::identity().text_form(), "D^0:");
    }
}
