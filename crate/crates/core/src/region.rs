//! Points and the compact seed/enclosure regions the geometric layer works
//! with. Regions double as rigorous outer enclosures for cylinder images, so
//! every predicate here errs on the safe side: containment may under-report,
//! disjointness may fail to certify, never the opposite.

use crate::util::angle_diff;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }
}

/// Compact region in R^1 or R^2.
///
/// `Interval` lives on the line; `Ball`, `Rect` and `Sector` in the plane.
/// `Sector` is an annular sector in polar coordinates: `rho` is the radial
/// interval and `theta` an unwrapped angular interval of width < 2π. Its
/// diameter is measured along paths inside the region, which dominates the
/// Euclidean diameter, so contraction bookkeeping stays valid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Region {
    Interval { lo: f64, hi: f64 },
    Ball { center: Point, radius: f64 },
    Rect { min: Point, max: Point },
    Sector { rho: [f64; 2], theta: [f64; 2] },
}

impl Region {
    pub fn interval(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "interval bounds out of order");
        Region::Interval { lo, hi }
    }

    pub fn ball(cx: f64, cy: f64, radius: f64) -> Self {
        assert!(radius >= 0.0);
        Region::Ball {
            center: Point::new(cx, cy),
            radius,
        }
    }

    pub fn rect(min: Point, max: Point) -> Self {
        assert!(min.x <= max.x && min.y <= max.y);
        Region::Rect { min, max }
    }

    pub fn sector(rho: [f64; 2], theta: [f64; 2]) -> Self {
        assert!(rho[0] > 0.0 && rho[0] <= rho[1]);
        assert!(theta[0] <= theta[1] && theta[1] - theta[0] < 2.0 * std::f64::consts::PI);
        Region::Sector { rho, theta }
    }

    pub fn dim(&self) -> usize {
        match self {
            Region::Interval { .. } => 1,
            _ => 2,
        }
    }

    pub fn center(&self) -> Point {
        match *self {
            Region::Interval { lo, hi } => Point::new(0.5 * (lo + hi), 0.0),
            Region::Ball { center, .. } => center,
            Region::Rect { min, max } => Point::new(0.5 * (min.x + max.x), 0.5 * (min.y + max.y)),
            Region::Sector { rho, theta } => {
                let r = 0.5 * (rho[0] + rho[1]);
                let t = 0.5 * (theta[0] + theta[1]);
                Point::new(r * t.cos(), r * t.sin())
            }
        }
    }

    /// Path diameter: equals the Euclidean diameter for the convex variants
    /// and bounds it for sectors (radial span plus outer arc length).
    pub fn diameter(&self) -> f64 {
        match *self {
            Region::Interval { lo, hi } => hi - lo,
            Region::Ball { radius, .. } => 2.0 * radius,
            Region::Rect { min, max } => (max.x - min.x).hypot(max.y - min.y),
            Region::Sector { rho, theta } => (rho[1] - rho[0]) + rho[1] * (theta[1] - theta[0]),
        }
    }

    pub fn contains_point(&self, p: &Point, tol: f64) -> bool {
        match *self {
            Region::Interval { lo, hi } => p.x >= lo - tol && p.x <= hi + tol && p.y == 0.0,
            Region::Ball { center, radius } => center.dist(p) <= radius + tol,
            Region::Rect { min, max } => {
                p.x >= min.x - tol && p.x <= max.x + tol && p.y >= min.y - tol && p.y <= max.y + tol
            }
            Region::Sector { rho, theta } => {
                let r = p.norm();
                if r < rho[0] - tol || r > rho[1] + tol {
                    return false;
                }
                let mid = 0.5 * (theta[0] + theta[1]);
                let half = 0.5 * (theta[1] - theta[0]);
                angle_diff(p.y.atan2(p.x), mid).abs() <= half + tol / rho[0].max(1e-300)
            }
        }
    }

    /// Certified `self ⊆ outer` up to `tol`. Conservative: a `false` may just
    /// mean the pair of shapes is not comparable cheaply.
    pub fn contained_in(&self, outer: &Region, tol: f64) -> bool {
        match (*self, *outer) {
            (Region::Interval { lo: a, hi: b }, Region::Interval { lo, hi }) => {
                a >= lo - tol && b <= hi + tol
            }
            (
                Region::Ball { center: c1, radius: r1 },
                Region::Ball { center: c2, radius: r2 },
            ) => c1.dist(&c2) + r1 <= r2 + tol,
            (Region::Ball { center, radius }, Region::Rect { min, max }) => {
                center.x - radius >= min.x - tol
                    && center.x + radius <= max.x + tol
                    && center.y - radius >= min.y - tol
                    && center.y + radius <= max.y + tol
            }
            (Region::Rect { min, max }, Region::Ball { center, radius }) => {
                let corners = [
                    Point::new(min.x, min.y),
                    Point::new(min.x, max.y),
                    Point::new(max.x, min.y),
                    Point::new(max.x, max.y),
                ];
                corners.iter().all(|p| center.dist(p) <= radius + tol)
            }
            (Region::Rect { min: a, max: b }, Region::Rect { min, max }) => {
                a.x >= min.x - tol && a.y >= min.y - tol && b.x <= max.x + tol && b.y <= max.y + tol
            }
            (Region::Sector { rho: r1, theta: t1 }, Region::Sector { rho: r2, theta: t2 }) => {
                let ang_tol = tol / r2[0].max(1e-300);
                let mid2 = 0.5 * (t2[0] + t2[1]);
                let half2 = 0.5 * (t2[1] - t2[0]);
                let mid1 = 0.5 * (t1[0] + t1[1]);
                let half1 = 0.5 * (t1[1] - t1[0]);
                r1[0] >= r2[0] - tol
                    && r1[1] <= r2[1] + tol
                    && angle_diff(mid1, mid2).abs() + half1 <= half2 + ang_tol
            }
            (Region::Ball { center, radius }, Region::Sector { rho, theta }) => {
                let rc = center.norm();
                if rc - radius <= 0.0 {
                    return false;
                }
                let ang = (radius / rc).min(1.0).asin();
                let mid = 0.5 * (theta[0] + theta[1]);
                let half = 0.5 * (theta[1] - theta[0]);
                let ang_tol = tol / rho[0].max(1e-300);
                rc - radius >= rho[0] - tol
                    && rc + radius <= rho[1] + tol
                    && angle_diff(center.y.atan2(center.x), mid).abs() + ang <= half + ang_tol
            }
            _ => false,
        }
    }

    /// Certified "interiors of both regions shrunk by `tol` are disjoint".
    pub fn interiors_disjoint(&self, other: &Region, tol: f64) -> bool {
        match (*self, *other) {
            (Region::Interval { lo: a, hi: b }, Region::Interval { lo, hi }) => {
                b.min(hi) - a.max(lo) <= 2.0 * tol
            }
            (
                Region::Ball { center: c1, radius: r1 },
                Region::Ball { center: c2, radius: r2 },
            ) => c1.dist(&c2) >= r1 + r2 - 2.0 * tol,
            (Region::Rect { min: a, max: b }, Region::Rect { min, max }) => {
                let ox = b.x.min(max.x) - a.x.max(min.x);
                let oy = b.y.min(max.y) - a.y.max(min.y);
                ox.min(oy) <= 2.0 * tol
            }
            (Region::Ball { center, radius }, Region::Rect { min, max })
            | (Region::Rect { min, max }, Region::Ball { center, radius }) => {
                let dx = (min.x - center.x).max(0.0).max(center.x - max.x);
                let dy = (min.y - center.y).max(0.0).max(center.y - max.y);
                dx.hypot(dy) >= radius - 2.0 * tol
            }
            (Region::Sector { rho: r1, theta: t1 }, Region::Sector { rho: r2, theta: t2 }) => {
                let radial = r1[1].min(r2[1]) - r1[0].max(r2[0]) <= 2.0 * tol;
                let mid1 = 0.5 * (t1[0] + t1[1]);
                let mid2 = 0.5 * (t2[0] + t2[1]);
                let half1 = 0.5 * (t1[0] - t1[1]).abs();
                let half2 = 0.5 * (t2[0] - t2[1]).abs();
                let gap = angle_diff(mid1, mid2).abs() - half1 - half2;
                let ang_tol = 2.0 * tol / r1[0].min(r2[0]).max(1e-300);
                radial || gap >= -ang_tol
            }
            (a, b) => {
                let (ca, ra) = a.bounding_ball();
                let (cb, rb) = b.bounding_ball();
                ca.dist(&cb) >= ra + rb - 2.0 * tol
            }
        }
    }

    /// Smallest easily computed enclosing ball (center, radius).
    pub fn bounding_ball(&self) -> (Point, f64) {
        match *self {
            Region::Interval { lo, hi } => (Point::new(0.5 * (lo + hi), 0.0), 0.5 * (hi - lo)),
            Region::Ball { center, radius } => (center, radius),
            Region::Rect { min, max } => (
                Point::new(0.5 * (min.x + max.x), 0.5 * (min.y + max.y)),
                0.5 * (max.x - min.x).hypot(max.y - min.y),
            ),
            Region::Sector { rho, theta } => {
                let c = self.center();
                // all four corners plus the outer-arc midpoint bound the sector
                let mid = 0.5 * (theta[0] + theta[1]);
                let mut r = c.dist(&Point::new(rho[1] * mid.cos(), rho[1] * mid.sin()));
                for &t in &theta {
                    for &q in &rho {
                        r = r.max(c.dist(&Point::new(q * t.cos(), q * t.sin())));
                    }
                }
                (c, r)
            }
        }
    }

    /// Enlarged copy (used for extension domains around seeds).
    pub fn inflate(&self, margin: f64) -> Region {
        match *self {
            Region::Interval { lo, hi } => Region::Interval {
                lo: lo - margin,
                hi: hi + margin,
            },
            Region::Ball { center, radius } => Region::Ball {
                center,
                radius: radius + margin,
            },
            Region::Rect { min, max } => Region::Rect {
                min: Point::new(min.x - margin, min.y - margin),
                max: Point::new(max.x + margin, max.y + margin),
            },
            Region::Sector { rho, theta } => {
                let ang = margin / rho[0];
                Region::Sector {
                    rho: [(rho[0] - margin).max(1e-12), rho[1] + margin],
                    theta: [theta[0] - ang, theta[1] + ang],
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_disjointness() {
        let a = Region::interval(0.0, 0.5);
        let b = Region::interval(0.25, 0.75);
        let c = Region::interval(0.5, 1.0);
        assert!(!a.interiors_disjoint(&b, 1e-12));
        assert!(a.interiors_disjoint(&c, 1e-12));
    }

    #[test]
    fn rect_disjointness_shares_edge() {
        let a = Region::rect(Point::new(0.0, 0.0), Point::new(0.5, 0.5));
        let b = Region::rect(Point::new(0.5, 0.0), Point::new(1.0, 0.5));
        assert!(a.interiors_disjoint(&b, 0.0));
    }

    #[test]
    fn sector_membership_wraps() {
        let s = Region::sector([0.9, 1.1], [-0.5, 0.5]);
        assert!(s.contains_point(&Point::new(1.0, 0.0), 0.0));
        assert!(!s.contains_point(&Point::new(-1.0, 0.0), 0.0));
        let t = Region::sector([0.9, 1.1], [3.0, 3.6]); // straddles the ±π cut
        assert!(t.contains_point(&Point::new((3.2f64).cos(), (3.2f64).sin()), 1e-9));
    }

    #[test]
    fn ball_in_sector() {
        let s = Region::sector([0.8, 1.2], [-1.0, 1.0]);
        let b = Region::ball(1.0, 0.0, 0.05);
        assert!(b.contained_in(&s, 1e-12));
        let far = Region::ball(-1.0, 0.0, 0.05);
        assert!(!far.contained_in(&s, 1e-12));
    }
}
