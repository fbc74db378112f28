//! Conformal contractions: similarities, Möbius transformations, and local
//! analytic inverse branches of quadratic iterates.
//!
//! Every map exposes pointwise evaluation, the derivative magnitude, a
//! certified outer enclosure for images of regions, and a certified range of
//! the derivative magnitude over a region. Similarity and Möbius ranges are
//! exact (closed form); branch ranges come from stepwise enclosures with a
//! positive margin to the critical value at every pullback step.

use crate::error::{Error, Result};
use crate::region::{Point, Region};
use crate::util::angle_diff;
use num_complex::Complex64;

/// Angular pane width used when pulling wide sectors through a branch.
pub(crate) const SECTOR_PANE_WIDTH: f64 = 0.7;

fn cpx(p: Point) -> Complex64 {
    Complex64::new(p.x, p.y)
}

fn pt(z: Complex64) -> Point {
    Point::new(z.re, z.im)
}

/// Orientation-preserving or reversing similarity x ↦ r·Q·x + b with
/// certified ratio r ∈ (0, 1]. In one dimension the orthogonal part is the
/// sign; in two it is a rotation (degrees) with an optional reflection
/// (conjugation) applied first.
#[derive(Debug, Clone, PartialEq)]
pub struct Similarity {
    pub dim: usize,
    pub ratio: f64,
    pub rotation_deg: f64,
    pub reflect: bool,
    pub translate: Point,
}

impl Similarity {
    pub fn line(ratio: f64, reflect: bool, translate: f64) -> Self {
        Self {
            dim: 1,
            ratio,
            rotation_deg: 0.0,
            reflect,
            translate: Point::new(translate, 0.0),
        }
    }

    pub fn plane(ratio: f64, rotation_deg: f64, reflect: bool, translate: Point) -> Self {
        Self {
            dim: 2,
            ratio,
            rotation_deg,
            reflect,
            translate,
        }
    }

    fn rotor(&self) -> Complex64 {
        let t = self.rotation_deg.to_radians();
        Complex64::new(t.cos(), t.sin())
    }

    pub fn eval(&self, p: Point) -> Point {
        if self.dim == 1 {
            let s = if self.reflect { -self.ratio } else { self.ratio };
            Point::new(s * p.x + self.translate.x, 0.0)
        } else {
            let mut z = cpx(p);
            if self.reflect {
                z = z.conj();
            }
            pt(self.rotor() * self.ratio * z + cpx(self.translate))
        }
    }

    /// Rotation a multiple of 90° (and any reflection) keeps axis boxes
    /// axis-aligned, so their images stay exact rectangles.
    fn axis_preserving(&self) -> bool {
        self.rotation_deg.rem_euclid(90.0) == 0.0
    }
}

/// Möbius transformation z ↦ (az + b)/(cz + d). With real coefficients and
/// the pole outside an interval it restricts to a monotone real map, which
/// covers the continued-fraction generators x ↦ 1/(k + x).
#[derive(Debug, Clone, PartialEq)]
pub struct Moebius {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Moebius {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let det = a * d - b * c;
        if det.norm() < 1e-14 {
            return Err(Error::InvalidParameter(
                "moebius map has (near) zero determinant".into(),
            ));
        }
        Ok(Self { a, b, c, d })
    }

    /// The continued-fraction generator x ↦ 1/(k + x).
    pub fn gauss(k: u32) -> Self {
        Self {
            a: Complex64::new(0.0, 0.0),
            b: Complex64::new(1.0, 0.0),
            c: Complex64::new(1.0, 0.0),
            d: Complex64::new(k as f64, 0.0),
        }
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn is_real(&self) -> bool {
        self.a.im == 0.0 && self.b.im == 0.0 && self.c.im == 0.0 && self.d.im == 0.0
    }

    pub fn eval_c(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    pub fn deriv_mag_c(&self, z: Complex64) -> f64 {
        let q = self.c * z + self.d;
        self.det().norm() / q.norm_sqr()
    }

    /// Pole location, or None for affine maps.
    fn pole(&self) -> Option<Complex64> {
        if self.c.norm() < 1e-300 {
            None
        } else {
            Some(-self.d / self.c)
        }
    }

    /// Exact disk image of a disk not containing the pole.
    fn map_ball(&self, center: Complex64, radius: f64) -> Result<(Complex64, f64)> {
        match self.pole() {
            None => {
                let s = self.a / self.d;
                Ok((s * center + self.b / self.d, s.norm() * radius))
            }
            Some(p) => {
                let q = center - p;
                let denom = q.norm_sqr() - radius * radius;
                if denom <= 0.0 {
                    return Err(Error::UnsupportedRegion {
                        region: "ball".into(),
                        detail: "moebius pole inside the ball".into(),
                    });
                }
                let big_a = self.a / self.c;
                let big_b = (self.b * self.c - self.a * self.d) / (self.c * self.c);
                Ok((
                    big_a + big_b * q.conj() / denom,
                    big_b.norm() * radius / denom,
                ))
            }
        }
    }

    fn interval_guard(&self, lo: f64, hi: f64) -> Result<()> {
        if !self.is_real() {
            return Err(Error::UnsupportedRegion {
                region: "interval".into(),
                detail: "moebius map with complex coefficients on a real interval".into(),
            });
        }
        if let Some(p) = self.pole() {
            if p.re >= lo && p.re <= hi {
                return Err(Error::UnsupportedRegion {
                    region: "interval".into(),
                    detail: format!("moebius pole {} inside [{lo}, {hi}]", p.re),
                });
            }
        }
        Ok(())
    }
}

/// Local analytic inverse branch of the n-th iterate of f(z) = z² + c,
/// pinned down by the square-root sign chosen at each pullback step and by
/// reference angles recorded along the anchor's backward orbit. Evaluation
/// follows the recorded branch by nearest-angle continuation and finishes
/// with a Newton polish against the forward iterate.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticBranch {
    pub c: Complex64,
    /// true = take the negative square root at that step
    pub signs: Vec<bool>,
    /// the point whose backward orbit defined the branch (a seed-region anchor)
    pub anchor: Complex64,
    /// arg(y_{j-1} − c) along the anchor orbit, one per step
    pub ref_angles: Vec<f64>,
    /// Newton-refined fixed point of the branch
    pub fixed_point: Complex64,
}

/// Forward iterate of f(z) = z² + c.
pub fn quadratic_forward(c: Complex64, mut z: Complex64, n: usize) -> Complex64 {
    for _ in 0..n {
        z = z * z + c;
    }
    z
}

impl AnalyticBranch {
    pub fn depth(&self) -> usize {
        self.signs.len()
    }

    /// Construct with externally tracked reference angles (one per step,
    /// already consistent with some enclosure chain for the anchor).
    pub fn with_refs(
        c: Complex64,
        anchor: Complex64,
        signs: Vec<bool>,
        ref_angles: Vec<f64>,
    ) -> Result<Self> {
        if signs.len() != ref_angles.len() {
            return Err(Error::Julia(
                "one reference angle per pullback step required".into(),
            ));
        }
        let mut branch = Self {
            c,
            signs,
            anchor,
            ref_angles,
            fixed_point: anchor,
        };
        let mut fp = branch.eval_c(anchor);
        for _ in 0..200 {
            let next = branch.eval_c(fp);
            if (next - fp).norm() < 1e-15 {
                fp = next;
                break;
            }
            fp = next;
        }
        branch.fixed_point = fp;
        Ok(branch)
    }

    /// Construct from a sign path, recording reference angles along the
    /// anchor's backward orbit and refining the branch fixed point.
    pub fn from_signs(c: Complex64, anchor: Complex64, signs: Vec<bool>) -> Result<Self> {
        let mut ref_angles = Vec::with_capacity(signs.len());
        let mut y = anchor;
        for &neg in &signs {
            let t = y - c;
            if t.norm() == 0.0 {
                return Err(Error::Julia(
                    "backward orbit hit the critical value exactly".into(),
                ));
            }
            let th = t.im.atan2(t.re);
            ref_angles.push(th);
            let mut root = Complex64::from_polar(t.norm().sqrt(), 0.5 * th);
            if neg {
                root = -root;
            }
            y = root;
        }
        let mut branch = Self {
            c,
            signs,
            anchor,
            ref_angles,
            fixed_point: y,
        };
        // iterate to the attracting fixed point of the branch
        let mut fp = y;
        for _ in 0..200 {
            let next = branch.eval_c(fp);
            if (next - fp).norm() < 1e-15 {
                fp = next;
                break;
            }
            fp = next;
        }
        branch.fixed_point = fp;
        Ok(branch)
    }

    /// Raw square-root chain without the Newton polish: backward-stable and
    /// an order of magnitude cheaper, used by the hot enumeration paths.
    pub fn eval_raw_c(&self, w: Complex64) -> Complex64 {
        let mut y = w;
        for (j, &neg) in self.signs.iter().enumerate() {
            let t = y - self.c;
            let th = self.ref_angles[j] + angle_diff(t.im.atan2(t.re), self.ref_angles[j]);
            let mut root = Complex64::from_polar(t.norm().sqrt(), 0.5 * th);
            if neg {
                root = -root;
            }
            y = root;
        }
        y
    }

    pub fn eval_c(&self, w: Complex64) -> Complex64 {
        let n = self.depth();
        let mut z = self.eval_raw_c(w);
        // one or two Newton steps on f^n(z) - w sharpen the chain result
        for _ in 0..2 {
            let mut orbit = z;
            let mut deriv = Complex64::new(1.0, 0.0);
            for _ in 0..n {
                deriv *= 2.0 * orbit;
                orbit = orbit * orbit + self.c;
            }
            if deriv.norm() == 0.0 {
                break;
            }
            let step = (orbit - w) / deriv;
            z -= step;
            if step.norm() < 1e-15 * z.norm().max(1.0) {
                break;
            }
        }
        z
    }

    pub fn deriv_mag_c(&self, w: Complex64) -> f64 {
        // |g'(w)| = prod 1/(2|y_j|) over the square-root chain values
        let mut y = w;
        let mut mag = 1.0;
        for (j, &neg) in self.signs.iter().enumerate() {
            let t = y - self.c;
            let th = self.ref_angles[j] + angle_diff(t.im.atan2(t.re), self.ref_angles[j]);
            let mut root = Complex64::from_polar(t.norm().sqrt(), 0.5 * th);
            if neg {
                root = -root;
            }
            y = root;
            mag /= 2.0 * y.norm();
        }
        mag
    }

    /// Stepwise certified pullback of a ball: returns the final enclosure
    /// ball and the accumulated derivative-magnitude range. Fails if any
    /// step's domain cannot be separated from the critical value.
    fn chain_ball(&self, center: Complex64, radius: f64) -> Result<(Complex64, f64, f64, f64)> {
        let mut m = center;
        let mut rho = radius;
        let (mut dlo, mut dhi) = (1.0, 1.0);
        for (j, &neg) in self.signs.iter().enumerate() {
            let t = m - self.c;
            let tn = t.norm();
            let delta = tn - rho;
            if delta <= 0.0 {
                return Err(Error::Julia(format!(
                    "pullback step {j}: enclosure reaches the critical value (|t| = {tn:.3e}, rho = {rho:.3e})"
                )));
            }
            // |t| over the ball lies in [delta, tn + rho]
            dlo /= 2.0 * (tn + rho).sqrt();
            dhi /= 2.0 * delta.sqrt();
            let th = self.ref_angles[j] + angle_diff(t.im.atan2(t.re), self.ref_angles[j]);
            let mut root = Complex64::from_polar(tn.sqrt(), 0.5 * th);
            if neg {
                root = -root;
            }
            // sharp enclosure radius for the square root on a ball:
            // |sqrt(t') - sqrt(t)| = |t' - t| / |sqrt(t') + sqrt(t)| and the two
            // roots are within asin(rho/|t|)/2 in angle
            let half_ang = 0.5 * (rho / tn).min(1.0).asin();
            let denom = tn.sqrt() + delta.sqrt() * half_ang.cos();
            let new_rho = rho / denom;
            m = root;
            rho = new_rho;
            if rho >= m.norm() {
                return Err(Error::Julia(format!(
                    "pullback step {j}: enclosure wraps the origin (rho = {rho:.3e} >= |m| = {:.3e})",
                    m.norm()
                )));
            }
        }
        Ok((m, rho, dlo, dhi))
    }

    /// Stepwise certified pullback of one narrow polar box.
    fn chain_sector_narrow(
        &self,
        rho: [f64; 2],
        theta: [f64; 2],
    ) -> Result<([f64; 2], [f64; 2], f64, f64)> {
        let (mut rr, mut tt) = (rho, theta);
        let (mut dlo, mut dhi) = (1.0, 1.0);
        for (j, &neg) in self.signs.iter().enumerate() {
            let (mr, mt) = polar_box_sub(rr, tt, self.c)?;
            dlo /= 2.0 * mr[1].sqrt();
            dhi /= 2.0 * mr[0].sqrt();
            // align the angular window with the recorded branch
            let refa = self.ref_angles[j];
            let mid = 0.5 * (mt[0] + mt[1]);
            let shift = refa + angle_diff(mid, refa) - mid;
            let t0 = mt[0] + shift;
            let t1 = mt[1] + shift;
            let add = if neg { std::f64::consts::PI } else { 0.0 };
            rr = [mr[0].sqrt(), mr[1].sqrt()];
            tt = [0.5 * t0 + add, 0.5 * t1 + add];
        }
        Ok((rr, tt, dlo, dhi))
    }

    /// Certified pullback of an annular sector. Wide sectors are split into
    /// angular panes chained independently; the hull of the pane images is a
    /// far tighter outer enclosure than one box pushed through whole.
    fn chain_sector(
        &self,
        rho: [f64; 2],
        theta: [f64; 2],
    ) -> Result<([f64; 2], [f64; 2], f64, f64)> {
        let width = theta[1] - theta[0];
        let panes = (width / SECTOR_PANE_WIDTH).ceil().max(1.0) as usize;
        if panes == 1 {
            return self.chain_sector_narrow(rho, theta);
        }
        let mut hull: Option<([f64; 2], [f64; 2])> = None;
        let (mut dlo, mut dhi) = (f64::INFINITY, 0.0f64);
        for k in 0..panes {
            let a = theta[0] + width * k as f64 / panes as f64;
            let b = theta[0] + width * (k + 1) as f64 / panes as f64;
            let (rr, tt, lo, hi) = self.chain_sector_narrow(rho, [a, b])?;
            dlo = dlo.min(lo);
            dhi = dhi.max(hi);
            hull = Some(match hull {
                None => (rr, tt),
                Some((hr, ht)) => {
                    // align the pane's angular interval with the hull's frame
                    let mid = 0.5 * (ht[0] + ht[1]);
                    let shift = mid + angle_diff(0.5 * (tt[0] + tt[1]), mid)
                        - 0.5 * (tt[0] + tt[1]);
                    (
                        [hr[0].min(rr[0]), hr[1].max(rr[1])],
                        [ht[0].min(tt[0] + shift), ht[1].max(tt[1] + shift)],
                    )
                }
            });
        }
        let (rr, tt) = hull.expect("at least one pane");
        Ok((rr, tt, dlo, dhi))
    }

    pub fn image_enclosure(&self, region: &Region) -> Result<Region> {
        match *region {
            Region::Ball { center, radius } => {
                let (m, rho, _, _) = self.chain_ball(cpx(center), radius)?;
                Ok(Region::Ball {
                    center: pt(m),
                    radius: rho,
                })
            }
            Region::Sector { rho, theta } => {
                let (rr, tt, _, _) = self.chain_sector(rho, theta)?;
                Ok(Region::sector(rr, tt))
            }
            _ => Err(Error::UnsupportedRegion {
                region: format!("{region:?}"),
                detail: "analytic branches operate on balls and annular sectors".into(),
            }),
        }
    }

    pub fn deriv_range(&self, region: &Region) -> Result<(f64, f64)> {
        match *region {
            Region::Ball { center, radius } => {
                let (_, _, dlo, dhi) = self.chain_ball(cpx(center), radius)?;
                Ok((dlo, dhi))
            }
            Region::Sector { rho, theta } => {
                let (_, _, dlo, dhi) = self.chain_sector(rho, theta)?;
                Ok((dlo, dhi))
            }
            _ => Err(Error::UnsupportedRegion {
                region: format!("{region:?}"),
                detail: "analytic branches operate on balls and annular sectors".into(),
            }),
        }
    }
}

/// Rigorous polar hull of { z − c : z in the sector }, assuming the shifted
/// set stays away from the origin. Modulus extremes sit at corners or on the
/// two angular critical lines of |z − c|; argument extremes sit at corners
/// because arg(ρe^{iφ} − c) is monotone along both coordinate directions
/// whenever ρ > |c|.
pub(crate) fn polar_box_sub(
    rho: [f64; 2],
    theta: [f64; 2],
    c: Complex64,
) -> Result<([f64; 2], [f64; 2])> {
    let cn = c.norm();
    if rho[0] <= cn {
        return Err(Error::Julia(format!(
            "sector reaches inward of the critical value shift (rho_min = {} <= |c| = {cn})",
            rho[0]
        )));
    }
    let mut mlo = f64::INFINITY;
    let mut mhi = f64::NEG_INFINITY;
    let mut consider = |r: f64, t: f64| {
        let m = (Complex64::from_polar(r, t) - c).norm();
        mlo = mlo.min(m);
        mhi = mhi.max(m);
    };
    for &r in &rho {
        for &t in &theta {
            consider(r, t);
        }
    }
    if cn > 0.0 {
        let ca = c.im.atan2(c.re);
        for cand in [ca, ca + std::f64::consts::PI, ca - std::f64::consts::PI] {
            // place the critical angle inside the (unwrapped) window if possible
            let mid = 0.5 * (theta[0] + theta[1]);
            let t = mid + angle_diff(cand, mid);
            if t >= theta[0] && t <= theta[1] {
                consider(rho[0], t);
                consider(rho[1], t);
            }
        }
    }
    // argument extremes at corners, unwrapped around the center direction
    let center = Complex64::from_polar(0.5 * (rho[0] + rho[1]), 0.5 * (theta[0] + theta[1]));
    let refa = {
        let t = center - c;
        t.im.atan2(t.re)
    };
    let mut alo = f64::INFINITY;
    let mut ahi = f64::NEG_INFINITY;
    for &r in &rho {
        for &t in &theta {
            let z = Complex64::from_polar(r, t) - c;
            let a = refa + angle_diff(z.im.atan2(z.re), refa);
            alo = alo.min(a);
            ahi = ahi.max(a);
        }
    }
    Ok(([mlo, mhi], [alo, ahi]))
}

/// A conformal contraction together with certified enclosure arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub enum ConformalMap {
    Similarity(Similarity),
    Moebius(Moebius),
    Branch(AnalyticBranch),
}

impl ConformalMap {
    pub fn eval(&self, p: Point) -> Point {
        match self {
            ConformalMap::Similarity(s) => s.eval(p),
            ConformalMap::Moebius(m) => {
                let z = m.eval_c(cpx(p));
                if m.is_real() && p.y == 0.0 {
                    Point::new(z.re, 0.0)
                } else {
                    pt(z)
                }
            }
            ConformalMap::Branch(b) => pt(b.eval_raw_c(cpx(p))),
        }
    }

    pub fn deriv_mag(&self, p: Point) -> f64 {
        match self {
            ConformalMap::Similarity(s) => s.ratio,
            ConformalMap::Moebius(m) => m.deriv_mag_c(cpx(p)),
            ConformalMap::Branch(b) => b.deriv_mag_c(cpx(p)),
        }
    }

    /// Certified outer enclosure of the image of `region`.
    pub fn image_enclosure(&self, region: &Region) -> Result<Region> {
        match (self, region) {
            (ConformalMap::Similarity(s), Region::Interval { lo, hi }) => {
                if s.dim != 1 {
                    return Err(Error::UnsupportedRegion {
                        region: "interval".into(),
                        detail: "planar similarity applied to an interval".into(),
                    });
                }
                let a = s.eval(Point::new(*lo, 0.0)).x;
                let b = s.eval(Point::new(*hi, 0.0)).x;
                Ok(Region::interval(a.min(b), a.max(b)))
            }
            (ConformalMap::Similarity(s), Region::Ball { center, radius }) => {
                Ok(Region::Ball {
                    center: s.eval(*center),
                    radius: s.ratio * radius,
                })
            }
            (ConformalMap::Similarity(s), Region::Rect { min, max }) => {
                if s.axis_preserving() {
                    let corners = [
                        s.eval(Point::new(min.x, min.y)),
                        s.eval(Point::new(min.x, max.y)),
                        s.eval(Point::new(max.x, min.y)),
                        s.eval(Point::new(max.x, max.y)),
                    ];
                    let xs: Vec<f64> = corners.iter().map(|p| p.x).collect();
                    let ys: Vec<f64> = corners.iter().map(|p| p.y).collect();
                    Ok(Region::rect(
                        Point::new(
                            xs.iter().cloned().fold(f64::INFINITY, f64::min),
                            ys.iter().cloned().fold(f64::INFINITY, f64::min),
                        ),
                        Point::new(
                            xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
                            ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
                        ),
                    ))
                } else {
                    let (c, r) = region.bounding_ball();
                    Ok(Region::Ball {
                        center: s.eval(c),
                        radius: s.ratio * r,
                    })
                }
            }
            (ConformalMap::Moebius(m), Region::Interval { lo, hi }) => {
                m.interval_guard(*lo, *hi)?;
                let a = m.eval_c(Complex64::new(*lo, 0.0)).re;
                let b = m.eval_c(Complex64::new(*hi, 0.0)).re;
                Ok(Region::interval(a.min(b), a.max(b)))
            }
            (ConformalMap::Moebius(m), Region::Ball { center, radius }) => {
                let (z, r) = m.map_ball(cpx(*center), *radius)?;
                Ok(Region::Ball {
                    center: pt(z),
                    radius: r,
                })
            }
            (ConformalMap::Moebius(m), r @ Region::Rect { .. }) => {
                let (c, rad) = r.bounding_ball();
                let (z, rr) = m.map_ball(cpx(c), rad)?;
                Ok(Region::Ball {
                    center: pt(z),
                    radius: rr,
                })
            }
            (ConformalMap::Branch(b), r) => b.image_enclosure(r),
            (m, r) => Err(Error::UnsupportedRegion {
                region: format!("{r:?}"),
                detail: format!("map {m:?} does not support this region"),
            }),
        }
    }

    /// Certified [min, max] of the derivative magnitude over `region`.
    pub fn deriv_range(&self, region: &Region) -> Result<(f64, f64)> {
        match (self, region) {
            (ConformalMap::Similarity(s), _) => Ok((s.ratio, s.ratio)),
            (ConformalMap::Moebius(m), Region::Interval { lo, hi }) => {
                m.interval_guard(*lo, *hi)?;
                let det = m.det().norm();
                let q_lo = (m.c * Complex64::new(*lo, 0.0) + m.d).norm_sqr();
                let q_hi = (m.c * Complex64::new(*hi, 0.0) + m.d).norm_sqr();
                Ok((det / q_lo.max(q_hi), det / q_lo.min(q_hi)))
            }
            (ConformalMap::Moebius(m), Region::Ball { center, radius }) => {
                let det = m.det().norm();
                match m.pole() {
                    None => {
                        let v = det / m.d.norm_sqr();
                        Ok((v, v))
                    }
                    Some(p) => {
                        let dist = (cpx(*center) - p).norm();
                        if dist <= *radius {
                            return Err(Error::UnsupportedRegion {
                                region: "ball".into(),
                                detail: "moebius pole inside the ball".into(),
                            });
                        }
                        let cn = m.c.norm_sqr();
                        let near = dist - radius;
                        let far = dist + radius;
                        Ok((det / (cn * far * far), det / (cn * near * near)))
                    }
                }
            }
            (ConformalMap::Moebius(m), r @ Region::Rect { .. }) => {
                let (c, rad) = r.bounding_ball();
                ConformalMap::Moebius(m.clone()).deriv_range(&Region::Ball {
                    center: c,
                    radius: rad,
                })
            }
            (ConformalMap::Branch(b), r) => b.deriv_range(r),
            (m, r) => Err(Error::UnsupportedRegion {
                region: format!("{r:?}"),
                detail: format!("map {m:?} does not support this region"),
            }),
        }
    }

    /// Compose two maps exactly when a closed form exists (similarity with
    /// similarity, Möbius with Möbius).
    pub fn compose_exact(&self, inner: &ConformalMap) -> Option<ConformalMap> {
        match (self, inner) {
            (ConformalMap::Similarity(o), ConformalMap::Similarity(i)) if o.dim == i.dim => {
                if o.dim == 1 {
                    let so = if o.reflect { -o.ratio } else { o.ratio };
                    let si = if i.reflect { -i.ratio } else { i.ratio };
                    let s = so * si;
                    let t = so * i.translate.x + o.translate.x;
                    Some(ConformalMap::Similarity(Similarity::line(
                        s.abs(),
                        s < 0.0,
                        t,
                    )))
                } else {
                    // o(i(z)) with possible conjugations
                    let (ro, ri) = (o.rotor() * o.ratio, i.rotor() * i.ratio);
                    let reflect = o.reflect ^ i.reflect;
                    let lin = if o.reflect { ro * ri.conj() } else { ro * ri };
                    let tr = if o.reflect {
                        ro * cpx(i.translate).conj() + cpx(o.translate)
                    } else {
                        ro * cpx(i.translate) + cpx(o.translate)
                    };
                    Some(ConformalMap::Similarity(Similarity::plane(
                        lin.norm(),
                        lin.im.atan2(lin.re).to_degrees(),
                        reflect,
                        pt(tr),
                    )))
                }
            }
            (ConformalMap::Moebius(o), ConformalMap::Moebius(i)) => {
                Some(ConformalMap::Moebius(Moebius {
                    a: o.a * i.a + o.b * i.c,
                    b: o.a * i.b + o.b * i.d,
                    c: o.c * i.a + o.d * i.c,
                    d: o.c * i.b + o.d * i.d,
                }))
            }
            _ => None,
        }
    }
}
