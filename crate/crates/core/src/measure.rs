//! Empirical measures: weighted point clouds with grid-accelerated closed
//! ball and strip mass queries, and a resolution floor below which queries
//! are sampling noise and get rejected.

use crate::error::{Error, Result};
use crate::gdms::PointSample;
use crate::region::Point;

/// Affine hyperplane: a point of the line in dimension one, a line in normal
/// form cos(θ)·x + sin(θ)·y = offset in dimension two.
#[derive(Debug, Clone, Copy)]
pub enum Hyperplane {
    Point { x: f64 },
    Line { theta: f64, offset: f64 },
}

impl Hyperplane {
    /// Line through `p` with normal direction θ.
    pub fn line_through(p: Point, theta: f64) -> Self {
        Hyperplane::Line {
            theta,
            offset: theta.cos() * p.x + theta.sin() * p.y,
        }
    }

    pub fn dist(&self, p: &Point) -> f64 {
        match *self {
            Hyperplane::Point { x } => (p.x - x).abs(),
            Hyperplane::Line { theta, offset } => {
                (theta.cos() * p.x + theta.sin() * p.y - offset).abs()
            }
        }
    }
}

#[derive(Debug, Clone)]
struct Grid {
    cell: f64,
    min: Point,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<u32>>,
}

impl Grid {
    fn build(points: &[Point]) -> Self {
        let mut min = Point::new(f64::INFINITY, f64::INFINITY);
        let mut max = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            min.x = min.x.min(p.x);
            min.y = min.y.min(p.y);
            max.x = max.x.max(p.x);
            max.y = max.y.max(p.y);
        }
        let extent = (max.x - min.x).max(max.y - min.y).max(1e-300);
        let target = (points.len() as f64).sqrt().clamp(8.0, 512.0);
        let cell = extent / target;
        let nx = ((max.x - min.x) / cell).floor() as usize + 1;
        let ny = ((max.y - min.y) / cell).floor() as usize + 1;
        let mut buckets = vec![Vec::new(); nx * ny];
        for (i, p) in points.iter().enumerate() {
            let bx = (((p.x - min.x) / cell).floor() as usize).min(nx - 1);
            let by = (((p.y - min.y) / cell).floor() as usize).min(ny - 1);
            buckets[by * nx + bx].push(i as u32);
        }
        Self {
            cell,
            min,
            nx,
            ny,
            buckets,
        }
    }

    fn for_ball(&self, center: Point, r: f64, mut visit: impl FnMut(u32)) {
        let x0 = (((center.x - r - self.min.x) / self.cell).floor().max(0.0)) as usize;
        let y0 = (((center.y - r - self.min.y) / self.cell).floor().max(0.0)) as usize;
        let x1 = ((((center.x + r - self.min.x) / self.cell).floor()).max(0.0) as usize)
            .min(self.nx - 1);
        let y1 = ((((center.y + r - self.min.y) / self.cell).floor()).max(0.0) as usize)
            .min(self.ny - 1);
        for by in y0.min(self.ny - 1)..=y1 {
            for bx in x0.min(self.nx - 1)..=x1 {
                for &i in &self.buckets[by * self.nx + bx] {
                    visit(i);
                }
            }
        }
    }
}

/// Weighted point cloud standing in for a measure on a limit set.
#[derive(Debug, Clone)]
pub struct EmpiricalMeasure {
    pub dim: usize,
    points: Vec<Point>,
    weights: Vec<f64>,
    /// ball resolution floor: 5 × the median nearest-neighbor spacing
    pub r_min: f64,
    /// strip thickness floor: 2 × the median spacing. Strips span the whole
    /// ball in the long direction, so they tolerate a much thinner width
    /// than an isotropic ball before turning into sampling noise.
    pub strip_floor: f64,
    grid: Grid,
    pub bbox: (Point, Point),
}

impl EmpiricalMeasure {
    pub fn from_sample(sample: &PointSample) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::DegenerateSample("empty sample".into()));
        }
        let n = sample.points.len();
        let points = sample.points.clone();
        let weights: Vec<f64> = match &sample.weights {
            Some(w) => {
                let total: f64 = w.iter().sum();
                if total <= 0.0 {
                    return Err(Error::DegenerateSample("weights sum to zero".into()));
                }
                w.iter().map(|x| x / total).collect()
            }
            None => vec![1.0 / n as f64; n],
        };
        if weights.iter().any(|&w| w < 0.0) {
            return Err(Error::DegenerateSample("negative weight".into()));
        }
        let grid = Grid::build(&points);
        let mut min = Point::new(f64::INFINITY, f64::INFINITY);
        let mut max = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &points {
            min.x = min.x.min(p.x);
            min.y = min.y.min(p.y);
            max.x = max.x.max(p.x);
            max.y = max.y.max(p.y);
        }
        let mut m = Self {
            dim: sample.dim,
            points,
            weights,
            r_min: 0.0,
            strip_floor: 0.0,
            grid,
            bbox: (min, max),
        };
        let nn = m.median_nearest_neighbor();
        m.r_min = 5.0 * nn;
        m.strip_floor = 2.0 * nn;
        Ok(m)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> Point {
        self.points[i]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn diameter(&self) -> f64 {
        let (min, max) = self.bbox;
        (max.x - min.x).hypot(max.y - min.y)
    }

    fn median_nearest_neighbor(&self) -> f64 {
        let n = self.points.len();
        if n < 2 {
            return 0.0;
        }
        let mut dists = Vec::with_capacity(n);
        for (i, p) in self.points.iter().enumerate() {
            let mut best = f64::INFINITY;
            let mut radius = self.grid.cell;
            // widen until a neighbor shows up
            for _ in 0..32 {
                self.grid.for_ball(*p, radius, |j| {
                    if j as usize != i {
                        let d = self.points[j as usize].dist(p);
                        if d < best {
                            best = d;
                        }
                    }
                });
                if best <= radius {
                    break;
                }
                radius *= 2.0;
            }
            if best.is_finite() {
                dists.push(best);
            }
        }
        dists.sort_by(|a, b| a.partial_cmp(b).unwrap());
        dists[(dists.len() - 1) / 2]
    }

    fn check_floor(&self, r: f64) -> Result<()> {
        if r <= 0.0 {
            return Err(Error::InvalidParameter("radius must be positive".into()));
        }
        if r < self.r_min {
            return Err(Error::BelowResolutionFloor {
                r,
                floor: self.r_min,
            });
        }
        Ok(())
    }

    /// Mass of the closed ball B(center, r).
    pub fn ball_mass(&self, center: Point, r: f64) -> Result<f64> {
        self.check_floor(r)?;
        let mut mass = 0.0;
        self.grid.for_ball(center, r, |i| {
            if self.points[i as usize].dist(&center) <= r {
                mass += self.weights[i as usize];
            }
        });
        Ok(mass)
    }

    /// Mass of B(center, r) ∩ N(L, thickness), closed on both counts.
    pub fn strip_ball_mass(
        &self,
        center: Point,
        r: f64,
        plane: &Hyperplane,
        thickness: f64,
    ) -> Result<f64> {
        self.check_floor(r)?;
        if thickness <= 0.0 || thickness < self.strip_floor {
            return Err(Error::BelowResolutionFloor {
                r: thickness,
                floor: self.strip_floor,
            });
        }
        let mut mass = 0.0;
        self.grid.for_ball(center, r, |i| {
            let p = &self.points[i as usize];
            if p.dist(&center) <= r && plane.dist(p) <= thickness {
                mass += self.weights[i as usize];
            }
        });
        Ok(mass)
    }

    /// Indices of support points inside the closed ball (no floor check:
    /// geometric accessor, not a mass estimate).
    pub fn indices_in_ball(&self, center: Point, r: f64) -> Vec<usize> {
        let mut out = Vec::new();
        self.grid.for_ball(center, r, |i| {
            if self.points[i as usize].dist(&center) <= r {
                out.push(i as usize);
            }
        });
        out.sort_unstable();
        out
    }
}
