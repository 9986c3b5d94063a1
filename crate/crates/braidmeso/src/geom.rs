//! Exact plane arithmetic for flat developments.
//!
//! Vertices of a unit-triangle development live on the lattice
//! { (p/2, q*sqrt3/2) : p, q integers, p+q even }. Points are stored as the
//! doubled integer pairs (p, q), so every angle test, distance comparison
//! and disk-membership query is integer arithmetic — no floating point in
//! any flatness certificate.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pt {
    pub p: i64,
    pub q: i64,
}

impl Pt {
    pub const ORIGIN: Pt = Pt { p: 0, q: 0 };

    pub fn new(p: i64, q: i64) -> Self {
        debug_assert!((p + q) % 2 == 0, "off-lattice point ({p},{q})");
        Pt { p, q }
    }

    pub fn add(self, o: Pt) -> Pt {
        Pt {
            p: self.p + o.p,
            q: self.q + o.q,
        }
    }

    pub fn sub(self, o: Pt) -> Pt {
        Pt {
            p: self.p - o.p,
            q: self.q - o.q,
        }
    }

    /// Rotate by +60 degrees about the origin.
    pub fn rot60(self) -> Pt {
        Pt {
            p: (self.p - 3 * self.q) / 2,
            q: (self.p + self.q) / 2,
        }
    }

    /// Rotate by -60 degrees about the origin.
    pub fn rot_m60(self) -> Pt {
        Pt {
            p: (self.p + 3 * self.q) / 2,
            q: (self.q - self.p) / 2,
        }
    }

    /// Four times the euclidean inner product with another lattice vector.
    pub fn dot4(self, o: Pt) -> i64 {
        self.p * o.p + 3 * self.q * o.q
    }

    /// Four times the squared length.
    pub fn norm4(self) -> i64 {
        self.dot4(self)
    }

    /// Positive when `o` lies counterclockwise of `self`.
    pub fn cross_sign(self, o: Pt) -> i64 {
        (self.p * o.q - self.q * o.p).signum()
    }

    pub fn as_f64(self) -> (f64, f64) {
        (self.p as f64 / 2.0, self.q as f64 * 3f64.sqrt() / 2.0)
    }
}

/// The six unit directions at multiples of 60 degrees.
pub const UNIT_DIRS: [Pt; 6] = [
    Pt { p: 2, q: 0 },
    Pt { p: 1, q: 1 },
    Pt { p: -1, q: 1 },
    Pt { p: -2, q: 0 },
    Pt { p: -1, q: -1 },
    Pt { p: 1, q: -1 },
];

/// An exact squared radius r^2 = num/den.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Radius2 {
    pub num: i64,
    pub den: i64,
}

impl Radius2 {
    pub fn of_integer(r: i64) -> Self {
        Radius2 { num: r * r, den: 1 }
    }

    /// r = a/b gives r^2 = a^2/b^2.
    pub fn of_fraction(a: i64, b: i64) -> Self {
        Radius2 {
            num: a * a,
            den: b * b,
        }
    }

    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

/// Is the squared distance (given as norm4/4) strictly less than r^2?
#[inline]
pub fn dist2_lt(norm4: i64, r2: Radius2) -> bool {
    (norm4 as i128) * (r2.den as i128) < 4 * (r2.num as i128)
}

#[inline]
pub fn dist2_le(norm4: i64, r2: Radius2) -> bool {
    (norm4 as i128) * (r2.den as i128) <= 4 * (r2.num as i128)
}

/// Exact squared point-segment distance comparison:
/// is dist(x, [a,b])^2 < r^2?
pub fn point_segment_dist2_lt(x: Pt, a: Pt, b: Pt, r2: Radius2) -> bool {
    let ab = b.sub(a);
    let ax = x.sub(a);
    let t_num = ax.dot4(ab);
    let t_den = ab.norm4();
    if t_num <= 0 {
        return dist2_lt(ax.norm4(), r2);
    }
    if t_num >= t_den {
        return dist2_lt(x.sub(b).norm4(), r2);
    }
    // perpendicular case: d^2 = (|ax|^2 |ab|^2 - <ax,ab>^2) / |ab|^2, all x4
    let num4 = (ax.norm4() as i128) * (t_den as i128) - (t_num as i128) * (t_num as i128);
    // compare num4 / (4 t_den) < r2  <=>  num4 * r2.den < 4 t_den r2.num
    num4 * (r2.den as i128) < 4 * (t_den as i128) * (r2.num as i128)
}

/// Does the closed triangle contain the point?
pub fn triangle_contains(tri: [Pt; 3], x: Pt) -> bool {
    let mut pos = false;
    let mut neg = false;
    for i in 0..3 {
        let a = tri[i];
        let b = tri[(i + 1) % 3];
        match b.sub(a).cross_sign(x.sub(a)) {
            1 => pos = true,
            -1 => neg = true,
            _ => {}
        }
    }
    !(pos && neg)
}

/// Does the open disk B(center, r) meet the interior of the triangle?
/// For a non-degenerate triangle this is equivalent to the closed triangle
/// approaching the center strictly closer than r.
pub fn triangle_meets_open_disk(tri: [Pt; 3], center: Pt, r2: Radius2) -> bool {
    if triangle_contains(tri, center) {
        return r2.num > 0;
    }
    (0..3).any(|i| point_segment_dist2_lt(center, tri[i], tri[(i + 1) % 3], r2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotations_have_order_six() {
        let mut v = Pt::new(2, 0);
        for _ in 0..6 {
            v = v.rot60();
            assert_eq!(v.norm4(), 4);
        }
        assert_eq!(v, Pt::new(2, 0));
        assert_eq!(Pt::new(1, 1).rot60(), Pt::new(-1, 1));
        assert_eq!(Pt::new(-1, 1).rot_m60(), Pt::new(1, 1));
    }

    #[test]
    fn unit_directions_are_unit() {
        for d in UNIT_DIRS {
            assert_eq!(d.norm4(), 4);
        }
        for i in 0..6 {
            assert_eq!(UNIT_DIRS[i].rot60(), UNIT_DIRS[(i + 1) % 6]);
        }
    }

    #[test]
    fn containment_and_disk_tests() {
        let tri = [Pt::new(0, 0), Pt::new(2, 0), Pt::new(1, 1)];
        assert!(triangle_contains(tri, Pt::new(1, 1)));
        assert!(!triangle_contains(tri, Pt::new(4, 0)));
        assert!(triangle_meets_open_disk(tri, Pt::new(0, 0), Radius2::of_integer(1)));
        assert!(!triangle_meets_open_disk(
            tri,
            Pt::new(6, 0),
            Radius2::of_integer(1)
        ));
        // grazing contact at distance exactly 1 does not meet the open disk
        assert!(!triangle_meets_open_disk(
            tri,
            Pt::new(4, 0),
            Radius2::of_integer(1)
        ));
    }

    #[test]
    fn segment_distance_comparisons() {
        let a = Pt::new(0, 0);
        let b = Pt::new(4, 0);
        // midpoint above the segment at height sqrt3/2
        assert!(point_segment_dist2_lt(
            Pt::new(2, 1),
            a,
            b,
            Radius2::of_integer(1)
        ));
        assert!(!point_segment_dist2_lt(
            Pt::new(2, 2),
            a,
            b,
            Radius2::of_integer(1)
        ));
    }
}
