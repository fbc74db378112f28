//! Geometric fitting: widths of planar point sets over rotating directions,
//! minimax (Chebyshev) lines, generalized-circle fits, and the small-triangle
//! irreducibility test based on bounded conformal distortion.

use crate::error::{Error, Result};
use crate::gdms::PointSample;
use crate::region::{Point, Region};

/// Width of the point set along the normal direction (cos θ, sin θ).
pub fn directional_width(points: &[Point], theta: f64) -> f64 {
    let (c, s) = (theta.cos(), theta.sin());
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for p in points {
        let t = c * p.x + s * p.y;
        lo = lo.min(t);
        hi = hi.max(t);
    }
    if lo > hi {
        0.0
    } else {
        hi - lo
    }
}

/// Minimizing direction over `n_dirs` equally spaced normals in [0, π),
/// followed by a local ternary refinement around the best cell.
pub fn min_width_direction(points: &[Point], n_dirs: usize) -> (f64, f64) {
    let n = n_dirs.max(4);
    let step = std::f64::consts::PI / n as f64;
    let mut best = (0.0, f64::INFINITY);
    for k in 0..n {
        let t = k as f64 * step;
        let w = directional_width(points, t);
        if w < best.1 {
            best = (t, w);
        }
    }
    // ternary refinement in the bracketing cell
    let (mut a, mut b) = (best.0 - step, best.0 + step);
    for _ in 0..40 {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        if directional_width(points, m1) <= directional_width(points, m2) {
            b = m2;
        } else {
            a = m1;
        }
    }
    let t = 0.5 * (a + b);
    let w = directional_width(points, t);
    if w < best.1 {
        (t, w)
    } else {
        best
    }
}

/// Chebyshev line of a planar point set: the line minimizing the maximum
/// distance to the points. Returned as (normal angle, offset); the maximum
/// distance equals half the minimal width.
pub fn minimax_line(points: &[Point], n_dirs: usize) -> (f64, f64, f64) {
    let (theta, width) = min_width_direction(points, n_dirs);
    let (c, s) = (theta.cos(), theta.sin());
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for p in points {
        let t = c * p.x + s * p.y;
        lo = lo.min(t);
        hi = hi.max(t);
    }
    (theta, 0.5 * (lo + hi), 0.5 * width)
}

/// Best generalized circle (circle or line) under the max-residual metric.
#[derive(Debug, Clone)]
pub enum SphereFit {
    Circle {
        center: Point,
        radius: f64,
        residual: f64,
    },
    Line {
        theta: f64,
        offset: f64,
        residual: f64,
    },
}

impl SphereFit {
    pub fn residual(&self) -> f64 {
        match self {
            SphereFit::Circle { residual, .. } | SphereFit::Line { residual, .. } => *residual,
        }
    }
}

/// Jacobi eigen-decomposition of a small symmetric matrix; returns the
/// eigenvector of the smallest eigenvalue.
fn smallest_eigenvector_sym(mut m: [[f64; 4]; 4]) -> [f64; 4] {
    let mut v = [[0.0f64; 4]; 4];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..64 {
        let mut off = 0.0;
        for p in 0..4 {
            for q in p + 1..4 {
                off += m[p][q] * m[p][q];
            }
        }
        if off < 1e-28 {
            break;
        }
        for p in 0..4 {
            for q in p + 1..4 {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let phi = 0.5 * (m[q][q] - m[p][p]) / m[p][q];
                let t = phi.signum() / (phi.abs() + (phi * phi + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..4 {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..4 {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let mut best = 0;
    for i in 1..4 {
        if m[i][i] < m[best][best] {
            best = i;
        }
    }
    [v[0][best], v[1][best], v[2][best], v[3][best]]
}

fn circle_residual(points: &[Point], center: Point) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for p in points {
        let d = center.dist(p);
        lo = lo.min(d);
        hi = hi.max(d);
    }
    (0.5 * (lo + hi), 0.5 * (hi - lo))
}

/// Least-max-residual generalized circle: algebraic fit (smallest singular
/// direction of the [x²+y², x, y, 1] design) refined by a compass search on
/// the center, compared against the Chebyshev line, best of the two.
pub fn generalized_sphere_fit(sample: &PointSample) -> Result<SphereFit> {
    let pts = &sample.points;
    if pts.len() < 4 {
        return Err(Error::DegenerateSample(format!(
            "need at least 4 points, got {}",
            pts.len()
        )));
    }
    let spread = pts
        .iter()
        .map(|p| p.dist(&pts[0]))
        .fold(0.0f64, f64::max);
    if spread < 1e-12 {
        return Err(Error::DegenerateSample(
            "all points coincide within 1e-12".into(),
        ));
    }

    // normalize for conditioning
    let n = pts.len() as f64;
    let mean = Point::new(
        pts.iter().map(|p| p.x).sum::<f64>() / n,
        pts.iter().map(|p| p.y).sum::<f64>() / n,
    );
    let scale = spread.max(1e-12);
    let norm: Vec<Point> = pts
        .iter()
        .map(|p| Point::new((p.x - mean.x) / scale, (p.y - mean.y) / scale))
        .collect();

    let mut m = [[0.0f64; 4]; 4];
    for p in &norm {
        let row = [p.x * p.x + p.y * p.y, p.x, p.y, 1.0];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] += row[i] * row[j];
            }
        }
    }
    let v = smallest_eigenvector_sym(m);

    let line = {
        let (theta, offset, residual) = minimax_line(pts, 720);
        SphereFit::Line {
            theta,
            offset,
            residual,
        }
    };

    // |a| too small relative to the linear part means the algebraic fit
    // degenerated to a line
    let a = v[0];
    if a.abs() < 1e-9 * (v[1].hypot(v[2])) {
        return Ok(line);
    }

    // back to original coordinates
    let cx = -v[1] / (2.0 * a) * scale + mean.x;
    let cy = -v[2] / (2.0 * a) * scale + mean.y;
    let mut center = Point::new(cx, cy);
    let (_, mut res) = circle_residual(pts, center);

    // compass search on the center for the minimax circle
    let mut step = 0.1 * spread;
    while step > 1e-12 * spread {
        let mut improved = false;
        for (dx, dy) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
            let cand = Point::new(center.x + dx * step, center.y + dy * step);
            let (_, r) = circle_residual(pts, cand);
            if r < res {
                center = cand;
                res = r;
                improved = true;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    let (radius, residual) = circle_residual(pts, center);
    let circle = SphereFit::Circle {
        center,
        radius,
        residual,
    };

    Ok(if circle.residual() <= line.residual() {
        circle
    } else {
        line
    })
}

/// Outcome of the small-triangle irreducibility test. `Inconclusive` never
/// claims reducibility.
#[derive(Debug, Clone, PartialEq)]
pub enum IrreducibilityVerdict {
    Irreducible { witness: [Point; 3] },
    Inconclusive,
}

/// Distortion bound for conformal embeddings of B(0,1) applied to a triangle
/// of side ≤ r inside B(0, 1/20): image side ratios inflate by at most this
/// factor.
pub fn koebe_ratio_bound(r: f64) -> f64 {
    let q = (19.0 + 20.0 * r) / (19.0 - 20.0 * r);
    q * q
}

/// Looks for three sample points deep inside the rescaled domain ball whose
/// triangle stays non-degenerate under any conformal embedding of the ball:
/// side ratios times the distortion bound must stay below 2, the minimum
/// ratio of a degenerate triangle. Finding one certifies the sample cannot
/// lie on a real-analytic curve image of the line.
pub fn koebe_triangle_irreducibility(
    sample: &PointSample,
    domain_ball: &Region,
) -> Result<IrreducibilityVerdict> {
    if sample.dim != 2 {
        return Err(Error::InvalidParameter(
            "triangle test requires a planar sample".into(),
        ));
    }
    let (center, radius) = match *domain_ball {
        Region::Ball { center, radius } if radius > 0.0 => (center, radius),
        _ => {
            return Err(Error::InvalidParameter(
                "domain must be a ball of positive radius".into(),
            ))
        }
    };
    // rescale so the domain is B(0,1); candidates live in B(0, 1/20)
    let mut candidates: Vec<(Point, Point)> = sample
        .points
        .iter()
        .filter_map(|p| {
            let q = Point::new((p.x - center.x) / radius, (p.y - center.y) / radius);
            (q.norm() < 0.05).then_some((q, *p))
        })
        .collect();
    // keep the triple search quadratic-ish: deterministic stride subsample
    if candidates.len() > 90 {
        let stride = candidates.len() / 90 + 1;
        candidates = candidates.into_iter().step_by(stride).collect();
    }
    let n = candidates.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (a, b, c) = (&candidates[i].0, &candidates[j].0, &candidates[k].0);
                let sides = [a.dist(b), a.dist(c), b.dist(c)];
                let longest = sides.iter().cloned().fold(0.0f64, f64::max);
                let shortest = sides.iter().cloned().fold(f64::INFINITY, f64::min);
                if shortest <= 0.0 {
                    continue;
                }
                let ratio = longest / shortest;
                if ratio * koebe_ratio_bound(longest) < 2.0 {
                    return Ok(IrreducibilityVerdict::Irreducible {
                        witness: [candidates[i].1, candidates[j].1, candidates[k].1],
                    });
                }
            }
        }
    }
    Ok(IrreducibilityVerdict::Inconclusive)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample2(points: Vec<Point>) -> PointSample {
        PointSample::bare(2, points)
    }

    #[test]
    fn width_of_square() {
        let pts = vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(1.0, 1.0),
        ];
        assert!((directional_width(&pts, 0.0) - 1.0).abs() < 1e-15);
        let (_, w) = min_width_direction(&pts, 720);
        assert!((w - 1.0).abs() < 1e-9);
    }

    #[test]
    fn circle_fit_is_exact_on_circle_data() {
        let pts: Vec<Point> = (0..100)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * (k as f64) / 100.0;
                Point::new(t.cos(), t.sin())
            })
            .collect();
        match generalized_sphere_fit(&sample2(pts)).unwrap() {
            SphereFit::Circle {
                center,
                radius,
                residual,
            } => {
                assert!(center.norm() < 1e-9);
                assert!((radius - 1.0).abs() < 1e-9);
                assert!(residual <= 1e-9);
            }
            other => panic!("expected circle, got {other:?}"),
        }
    }

    #[test]
    fn line_fit_is_exact_on_line_data() {
        let pts: Vec<Point> = (0..50)
            .map(|k| Point::new(k as f64 * 0.1, 0.5 + k as f64 * 0.05))
            .collect();
        match generalized_sphere_fit(&sample2(pts)).unwrap() {
            SphereFit::Line { residual, .. } => assert!(residual <= 1e-9),
            SphereFit::Circle { residual, .. } => {
                assert!(residual <= 1e-9, "huge circle approximating a line is fine")
            }
        }
    }

    #[test]
    fn degenerate_sample_rejected() {
        let pts = vec![Point::new(0.5, 0.5); 10];
        assert!(matches!(
            generalized_sphere_fit(&sample2(pts)),
            Err(Error::DegenerateSample(_))
        ));
    }

    #[test]
    fn koebe_bound_reproduces_margin_arithmetic() {
        // triangle side at most 2·(1/20): the bound collapses to ((19+2)/(19-2))²
        let b = koebe_ratio_bound(0.1);
        assert!((b - (21.0f64 / 17.0).powi(2)).abs() < 1e-15);
        assert!(b < 2.0);
    }

    #[test]
    fn koebe_verdicts() {
        let ball = Region::ball(0.0, 0.0, 1.0);
        // equilateral triangle inside B(0, 1/20)
        let r = 0.03;
        let tri: Vec<Point> = (0..3)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * (k as f64) / 3.0;
                Point::new(r * t.cos(), r * t.sin())
            })
            .collect();
        assert!(matches!(
            koebe_triangle_irreducibility(&sample2(tri), &ball).unwrap(),
            IrreducibilityVerdict::Irreducible { .. }
        ));

        // collinear points: every triangle is degenerate
        let line: Vec<Point> = (0..10).map(|k| Point::new(k as f64 * 0.004, 0.0)).collect();
        assert_eq!(
            koebe_triangle_irreducibility(&sample2(line), &ball).unwrap(),
            IrreducibilityVerdict::Inconclusive
        );

        // equilateral triangle at radius 1/2: outside the 1/20 core
        let far: Vec<Point> = (0..3)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * (k as f64) / 3.0;
                Point::new(0.5 * t.cos(), 0.5 * t.sin())
            })
            .collect();
        assert_eq!(
            koebe_triangle_irreducibility(&sample2(far), &ball).unwrap(),
            IrreducibilityVerdict::Inconclusive
        );
    }

    #[test]
    fn sierpinski_sample_far_from_any_generalized_circle() {
        let sys = crate::gdms::systems::sierpinski();
        let sample = sys.sample_limit_set(1000, 10, 11, None).unwrap();
        let fit = generalized_sphere_fit(&sample).unwrap();
        let diam = {
            let mut d = 0.0f64;
            for i in (0..sample.points.len()).step_by(37) {
                for j in (0..sample.points.len()).step_by(41) {
                    d = d.max(sample.points[i].dist(&sample.points[j]));
                }
            }
            d
        };
        assert!(
            fit.residual() > 0.01 * diam,
            "residual {} vs diam {diam}",
            fit.residual()
        );
    }
}
