//! The central quotient G = B4 / <z> and the section kappa.
//!
//! Multiplying by z shifts the Delta exponent by exactly 2 and leaves the
//! factor list untouched, so each coset has a unique representative with
//! inf in {0, 1}. That representative is the value of the section kappa and
//! doubles as the canonical form for quotient elements.

use crate::garside::{invert, multiply, normalize_str, power, BraidElement, WordParseError};
use crate::perm::PermIdx;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuotientElement {
    rep: BraidElement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralDecomposition {
    pub z_exp: i32,
    pub residue: QuotientElement,
}

/// z-exponent of the central part under the inf in {0,1} convention.
#[inline]
pub fn central_exponent(x: &BraidElement) -> i32 {
    x.inf.div_euclid(2)
}

pub fn project(x: &BraidElement) -> QuotientElement {
    let k = central_exponent(x);
    let mut rep = x.clone();
    rep.inf -= 2 * k;
    debug_assert!(rep.inf == 0 || rep.inf == 1);
    QuotientElement { rep }
}

pub fn central_decompose(x: &BraidElement) -> CentralDecomposition {
    CentralDecomposition {
        z_exp: central_exponent(x),
        residue: project(x),
    }
}

impl QuotientElement {
    pub fn identity() -> Self {
        QuotientElement {
            rep: BraidElement::identity(),
        }
    }

    pub fn from_str_word(s: &str) -> Result<Self, WordParseError> {
        Ok(project(&normalize_str(s)?))
    }

    pub fn is_identity(&self) -> bool {
        self.rep.is_identity()
    }

    /// The canonical braid representative with trivial central part.
    pub fn kappa(&self) -> &BraidElement {
        &self.rep
    }

    pub fn mul(&self, other: &QuotientElement) -> QuotientElement {
        project(&multiply(&self.rep, &other.rep))
    }

    pub fn inv(&self) -> QuotientElement {
        project(&invert(&self.rep))
    }

    pub fn underlying_permutation(&self) -> PermIdx {
        // well defined: z projects to the identity permutation
        self.rep.underlying_permutation()
    }

    /// Order of the element if it is torsion within the search bound.
    pub fn torsion_order(&self, max: u32) -> Option<u32> {
        let mut acc = QuotientElement::identity();
        for n in 1..=max {
            acc = acc.mul(self);
            if acc.is_identity() {
                return Some(n);
            }
        }
        None
    }

    pub fn text_form(&self) -> String {
        self.rep.text_form()
    }

    pub fn from_text(s: &str) -> Option<Self> {
        let rep = BraidElement::from_text(s)?;
        if rep.inf == 0 || rep.inf == 1 {
            Some(QuotientElement { rep })
        } else {
            None
        }
    }
}

/// kappa as a free function, mirroring project.
pub fn kappa(g: &QuotientElement) -> BraidElement {
    g.kappa().clone()
}

/// The 2-cocycle defining the central extension:
/// kappa(g) kappa(h) = z^{c(g,h)} kappa(gh).
pub fn cocycle(g: &QuotientElement, h: &QuotientElement) -> i32 {
    central_exponent(&multiply(g.kappa(), h.kappa()))
}

/// x = bac, the projected generator of the vertex stabilizer (order 4).
pub fn x_bar() -> QuotientElement {
    project(&normalize_str("bac").unwrap())
}

/// y = bac^2, of order 3 in the quotient.
pub fn y_bar() -> QuotientElement {
    project(&normalize_str("bacc").unwrap())
}

/// Power of a quotient element.
pub fn q_power(g: &QuotientElement, n: i32) -> QuotientElement {
    project(&power(g.kappa(), n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::garside::normalize_str;

    #[test]
    fn z_projects_to_identity() {
        let z = BraidElement::central_z();
        assert!(project(&z).is_identity());
        let d = central_decompose(&z);
        assert_eq!(d.z_exp, 1);
        assert!(d.residue.is_identity());
    }

    #[test]
    fn kappa_is_a_section() {
        for word in ["", "a", "abC", "bacbac", "AAbcBa"] {
            let x = normalize_str(word).unwrap();
            let g = project(&x);
            let back = kappa(&g);
            let k = central_exponent(&x);
            let shifted = multiply(&back, &BraidElement::delta_power(2 * k));
            assert_eq!(shifted, x);
        }
    }

    #[test]
    fn torsion_of_x_and_y() {
        assert_eq!(x_bar().torsion_order(12), Some(4));
        assert_eq!(y_bar().torsion_order(12), Some(3));
        for k in 1..4 {
            assert!(!q_power(&x_bar(), k).is_identity());
        }
        for k in 1..3 {
            assert!(!q_power(&y_bar(), k).is_identity());
        }
    }

    #[test]
    fn x_fourth_and_y_third_are_z() {
        let x = normalize_str("bac").unwrap();
        let y = normalize_str("bacc").unwrap();
        assert_eq!(power(&x, 4), BraidElement::central_z());
        assert_eq!(power(&y, 3), BraidElement::central_z());
    }

    #[test]
    fn cocycle_basics() {
        let e = QuotientElement::identity();
        assert_eq!(cocycle(&e, &e), 0);
        let d = project(&BraidElement::delta());
        assert_eq!(cocycle(&d, &d), 1);
    }

    /// The floor convention rounds away from zero on odd negative inf, so the
    /// clean |z_exp| <= |x|/2 bound holds verbatim only when inf >= 0 — which
    /// covers every product of section images, the case the cocycle bound
    /// needs. In general the bound weakens by a half.
    #[test]
    fn central_bound_on_random_elements() {
        use crate::garside::{normalize, ArtinWord, Letter};
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..400 {
            let n = rng.gen_range(0..35);
            let w = ArtinWord(
                (0..n)
                    .map(|_| Letter {
                        gen: rng.gen_range(0..3),
                        inverse: rng.gen_bool(0.5),
                    })
                    .collect(),
            );
            let x = normalize(&w);
            let z = 2 * central_exponent(&x).abs() as u32;
            if x.inf >= 0 {
                assert!(z <= x.thurston_length());
            } else {
                assert!(z <= x.thurston_length() + 1);
            }
        }
    }

    #[test]
    fn central_bound_exact_on_section_products() {
        use crate::garside::{multiply, normalize, ArtinWord, Letter};
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(29);
        for _ in 0..200 {
            let mut mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                let n = rng.gen_range(0..25);
                project(&normalize(&ArtinWord(
                    (0..n)
                        .map(|_| Letter {
                            gen: rng.gen_range(0..3),
                            inverse: rng.gen_bool(0.5),
                        })
                        .collect(),
                )))
            };
            let g = mk(&mut rng);
            let h = mk(&mut rng);
            let prod = multiply(g.kappa(), h.kappa());
            assert!(prod.inf >= 0);
            assert!(2 * central_exponent(&prod).unsigned_abs() <= prod.thurston_length());
        }
    }
}
