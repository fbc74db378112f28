//! Inverse-branch systems for quadratic polynomials f(z) = z² + c: Julia-set
//! sampling by backward iteration, finite branch systems on balls, mixed
//! return-time systems on annular sectors, dimension estimates for the
//! radial Julia set, and the radial / bounded-degree orbit probes.

use crate::error::{Error, Result};
use crate::gdms::{GDMSystem, PointSample};
use crate::maps::{AnalyticBranch, ConformalMap};
use crate::pressure::{bowen_root_with_budget, DimensionEstimate, DimensionMethod};
use crate::region::{Point, Region};
use crate::util::{angle_diff, rng_for_index};
use num_complex::Complex64;
use rand::RngExt;

const MAX_CRITICAL_ITERATIONS: usize = 10_000;
const ESCAPE_MARGIN: f64 = 2.0;

/// What the critical orbit did under iteration.
#[derive(Debug, Clone, PartialEq)]
pub enum HyperbolicityEvidence {
    /// orbit converged to an attracting cycle with |multiplier| < 1
    AttractingCycle { period: usize, multiplier: f64 },
    /// orbit left the escape radius
    EscapesToInfinity { at_step: usize },
    /// neither detected within the iteration budget (for example the orbit
    /// lands on a repelling cycle, as at c = −2)
    Inconclusive,
}

impl HyperbolicityEvidence {
    pub fn is_hyperbolic(&self) -> bool {
        !matches!(self, HyperbolicityEvidence::Inconclusive)
    }
}

/// The quadratic family member z ↦ z² + c with its cached critical orbit.
#[derive(Debug, Clone)]
pub struct QuadraticMap {
    pub c: Complex64,
    /// orbit of the critical point 0, up to escape or cycle entry
    pub critical_orbit: Vec<Complex64>,
    pub evidence: HyperbolicityEvidence,
}

impl QuadraticMap {
    pub fn new(c: Complex64) -> Self {
        let escape_r = 2.0f64.max(c.norm()) + ESCAPE_MARGIN;
        let mut orbit = vec![Complex64::new(0.0, 0.0)];
        let mut z = Complex64::new(0.0, 0.0);
        let mut evidence = HyperbolicityEvidence::Inconclusive;
        for step in 1..=MAX_CRITICAL_ITERATIONS {
            z = z * z + c;
            if z.norm() > escape_r {
                evidence = HyperbolicityEvidence::EscapesToInfinity { at_step: step };
                break;
            }
            // look for a cycle among the recent orbit points
            let lookback = orbit.len().min(64);
            let mut found = None;
            for p in 1..=lookback {
                if (orbit[orbit.len() - p] - z).norm() < 1e-11 {
                    found = Some(p);
                    break;
                }
            }
            orbit.push(z);
            if let Some(period) = found {
                let mut mult = Complex64::new(1.0, 0.0);
                let mut w = z;
                for _ in 0..period {
                    mult *= 2.0 * w;
                    w = w * w + c;
                }
                if mult.norm() < 1.0 - 1e-6 {
                    evidence = HyperbolicityEvidence::AttractingCycle {
                        period,
                        multiplier: mult.norm(),
                    };
                } else {
                    evidence = HyperbolicityEvidence::Inconclusive;
                }
                break;
            }
        }
        Self {
            c,
            critical_orbit: orbit,
            evidence,
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        z * z + self.c
    }

    pub fn escape_radius(&self) -> f64 {
        2.0f64.max(self.c.norm()) + ESCAPE_MARGIN
    }

    /// The fixed point (1 + √(1 − 4c))/2, repelling for the parameters in
    /// scope; the standard starting point for backward iteration.
    pub fn repelling_fixed_point(&self) -> Complex64 {
        let s = (Complex64::new(1.0, 0.0) - 4.0 * self.c).sqrt();
        let a = (Complex64::new(1.0, 0.0) + s) / 2.0;
        let b = (Complex64::new(1.0, 0.0) - s) / 2.0;
        if (2.0 * a).norm() >= (2.0 * b).norm() {
            a
        } else {
            b
        }
    }

    /// Julia-set sample by backward iteration with random preimage choice.
    pub fn sample_julia(&self, count: usize, seed: u64) -> PointSample {
        let mut rng = rng_for_index(seed, 0x9a11a);
        let mut z = self.repelling_fixed_point();
        let burn_in = 40;
        let mut points = Vec::with_capacity(count);
        for i in 0..burn_in + count {
            let t = z - self.c;
            let mut root = t.sqrt();
            if rng.random_range(0..2u8) == 1 {
                root = -root;
            }
            z = root;
            if i >= burn_in {
                points.push(Point::new(z.re, z.im));
            }
        }
        PointSample::bare(2, points)
    }

    fn min_dist_to_critical_orbit(&self, z: Complex64) -> f64 {
        self.critical_orbit
            .iter()
            .map(|&o| (z - o).norm())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Finite single-depth branch system: the inverse branches of f^depth that
/// map the base ball strictly into itself, packaged as a one-vertex IFS.
#[derive(Debug, Clone)]
pub struct BranchSystem {
    pub c: Complex64,
    pub base_center: Complex64,
    pub base_radius: f64,
    pub depth: usize,
    pub candidates: usize,
    pub system: GDMSystem,
}

pub fn build_branch_system(
    map: &QuadraticMap,
    base_center: Complex64,
    base_radius: f64,
    depth: usize,
) -> Result<BranchSystem> {
    if !(base_radius > 0.0) {
        return Err(Error::InvalidParameter("radius must be positive".into()));
    }
    if depth == 0 || depth > 20 {
        return Err(Error::InvalidParameter(
            "depth must be between 1 and 20".into(),
        ));
    }
    if !map.evidence.is_hyperbolic() {
        return Err(Error::Julia(
            "no hyperbolicity evidence: critical orbit neither escapes nor converges".into(),
        ));
    }
    let orbit_dist = map.min_dist_to_critical_orbit(base_center);
    if orbit_dist < 2.0 * base_radius {
        return Err(Error::Julia(format!(
            "base ball too close to the critical orbit (dist {orbit_dist:.3e} < 2r = {:.3e})",
            2.0 * base_radius
        )));
    }
    let sample = map.sample_julia(1000, 0x5eed);
    let center_pt = Point::new(base_center.re, base_center.im);
    let near = sample
        .points
        .iter()
        .map(|p| p.dist(&center_pt))
        .fold(f64::INFINITY, f64::min);
    if near > base_radius {
        return Err(Error::Julia(format!(
            "base ball misses the Julia set sample (nearest point {near:.3e} away)"
        )));
    }

    let base = Region::Ball {
        center: center_pt,
        radius: base_radius,
    };
    let mut named = Vec::new();
    let total = 1usize << depth;
    for code in 0..total {
        let signs: Vec<bool> = (0..depth).map(|j| (code >> j) & 1 == 1).collect();
        let branch = match AnalyticBranch::from_signs(map.c, base_center, signs) {
            Ok(b) => b,
            Err(_) => continue,
        };
        let Ok(enclosure) = branch.image_enclosure(&base) else {
            continue;
        };
        let Ok((_, d_hi)) = branch.deriv_range(&base) else {
            continue;
        };
        if d_hi >= 1.0 {
            continue;
        }
        if !enclosure.contained_in(&base, -1e-12 * base_radius) {
            continue;
        }
        named.push((format!("b{code}"), ConformalMap::Branch(branch)));
    }
    if named.is_empty() {
        return Err(Error::Julia(
            "no inverse branch returns into the base ball; increase depth or move the ball".into(),
        ));
    }
    let system = GDMSystem::ifs(base, named)?;
    Ok(BranchSystem {
        c: map.c,
        base_center,
        base_radius,
        depth,
        candidates: total,
        system,
    })
}

/// Mixed return-time system on an annular sector straddling the Julia set:
/// inverse branches of all iterates up to `max_return_time` whose first
/// return maps the sector strictly into itself, packed greedily under
/// pairwise disjointness of their image enclosures.
#[derive(Debug, Clone)]
pub struct ReturnSystem {
    pub c: Complex64,
    pub seed: Region,
    pub max_return_time: usize,
    pub system: GDMSystem,
    /// sum over retained maps of the upper derivative bound: how much of the
    /// local limit set the packing covers (approaches 1 from below)
    pub mass_bound: f64,
}

struct ReturnCandidate {
    signs: Vec<bool>,
    ref_angles: Vec<f64>,
    anchor_path_end: Complex64,
    d_hi: f64,
}

pub fn build_return_system(
    map: &QuadraticMap,
    theta_span: f64,
    max_return_time: usize,
    max_maps: usize,
) -> Result<ReturnSystem> {
    if !(theta_span > 0.1 && theta_span < 3.0) {
        return Err(Error::InvalidParameter(
            "theta span must lie in (0.1, 3.0)".into(),
        ));
    }
    if !map.evidence.is_hyperbolic() {
        return Err(Error::Julia(
            "no hyperbolicity evidence: critical orbit neither escapes nor converges".into(),
        ));
    }
    // radial band of the Julia set inside the angular window
    let sample = map.sample_julia(4000, 0xc0ffee);
    let mut rho_lo = f64::INFINITY;
    let mut rho_hi = 0.0f64;
    for p in &sample.points {
        let r = p.norm();
        let a = p.y.atan2(p.x);
        if a.abs() <= theta_span + 0.3 {
            rho_lo = rho_lo.min(r);
            rho_hi = rho_hi.max(r);
        }
    }
    if !rho_lo.is_finite() || rho_hi <= 0.0 {
        return Err(Error::Julia(
            "julia sample leaves the angular window empty".into(),
        ));
    }
    let pad = (0.05f64).max(0.3 * (rho_hi - rho_lo));
    let rho = [rho_lo - pad, rho_hi + pad];
    if rho[0] <= map.c.norm() + 0.05 {
        return Err(Error::Julia(format!(
            "sector reaches too far inward (rho_min = {:.3}) for |c| = {:.3}",
            rho[0],
            map.c.norm()
        )));
    }
    // the critical orbit must stay clear of the sector
    for &o in &map.critical_orbit {
        let r = o.norm();
        if r > rho[0] - 0.05 && r < rho[1] + 0.05 {
            let a = o.im.atan2(o.re);
            if a.abs() < theta_span + 0.05 {
                return Err(Error::Julia(
                    "critical orbit intersects the sector".into(),
                ));
            }
        }
    }
    let seed = Region::sector(rho, [-theta_span, theta_span]);
    let anchor = seed.center();
    let anchor_c = Complex64::new(anchor.x, anchor.y);

    // Iterative deepening over the full sign tree: for each target depth,
    // walk every pullback path, keep the windows that land strictly inside
    // the seed and do not overlap anything kept so far. Windows shrink
    // geometrically with depth, so depth order is largest-first packing.
    // Each path carries the seed split into angular panes: pane hulls stay
    // close to the true curved images where a single box would balloon.
    type Pane = ([f64; 2], [f64; 2]);

    struct Walker<'a> {
        c: Complex64,
        seed: &'a Region,
        theta_span: f64,
        covered: Vec<(f64, f64)>, // kept angular intervals, sorted
        kept: Vec<ReturnCandidate>,
        max_maps: usize,
        signs: Vec<bool>,
        refs: Vec<f64>,
    }

    fn pane_hull(panes: &[Pane]) -> Pane {
        let (mut rr, mut tt) = panes[0];
        for &(pr, pt) in &panes[1..] {
            rr = [rr[0].min(pr[0]), rr[1].max(pr[1])];
            let mid = 0.5 * (tt[0] + tt[1]);
            let pmid = 0.5 * (pt[0] + pt[1]);
            let shift = mid + angle_diff(pmid, mid) - pmid;
            tt = [tt[0].min(pt[0] + shift), tt[1].max(pt[1] + shift)];
        }
        (rr, tt)
    }

    impl Walker<'_> {
        fn overlaps_covered(&self, lo: f64, hi: f64) -> bool {
            let idx = self.covered.partition_point(|&(s, _)| s < lo);
            if idx < self.covered.len() && self.covered[idx].0 < hi {
                return true;
            }
            if idx > 0 && self.covered[idx - 1].1 > lo {
                return true;
            }
            false
        }

        #[allow(clippy::too_many_arguments)]
        fn walk(
            &mut self,
            target: usize,
            panes: &[Pane],
            anchor: Complex64,
            d_hi: f64,
            depth: usize,
        ) -> Result<()> {
            if self.kept.len() >= self.max_maps {
                return Ok(());
            }
            if depth == target {
                let (rho, theta) = pane_hull(panes);
                let mid = 0.5 * (theta[0] + theta[1]);
                let shift = angle_diff(mid, 0.0) - mid;
                let (lo, hi) = (theta[0] + shift, theta[1] + shift);
                if d_hi >= 1.0 || hi - lo <= 0.0 {
                    return Ok(());
                }
                if lo <= -self.theta_span || hi >= self.theta_span {
                    return Ok(());
                }
                let wrapped = Region::sector(rho, [lo, hi]);
                if !wrapped.contained_in(self.seed, -1e-12) {
                    return Ok(());
                }
                if self.overlaps_covered(lo, hi) {
                    return Ok(());
                }
                let idx = self.covered.partition_point(|&(s, _)| s < lo);
                self.covered.insert(idx, (lo, hi));
                self.kept.push(ReturnCandidate {
                    signs: self.signs.clone(),
                    ref_angles: self.refs.clone(),
                    anchor_path_end: anchor,
                    d_hi,
                });
                return Ok(());
            }
            // one pullback step applied pane by pane under a common sign
            let mut shifted: Vec<Pane> = Vec::with_capacity(panes.len());
            let mut min_mod = f64::INFINITY;
            for &(rho, theta) in panes {
                match crate::maps::polar_box_sub(rho, theta, self.c) {
                    Ok((mr, mt)) => {
                        min_mod = min_mod.min(mr[0]);
                        shifted.push((mr, mt));
                    }
                    Err(_) => return Ok(()), // path reaches the critical value
                }
            }
            let (_, hull_t) = pane_hull(&shifted);
            let t_anchor = anchor - self.c;
            let mid = 0.5 * (hull_t[0] + hull_t[1]);
            let ref_angle = mid + angle_diff(t_anchor.im.atan2(t_anchor.re), mid);
            let step_hi = 1.0 / (2.0 * min_mod.sqrt());
            for neg in [false, true] {
                let add = if neg { std::f64::consts::PI } else { 0.0 };
                let next: Vec<Pane> = shifted
                    .iter()
                    .map(|&(mr, mt)| {
                        // keep every pane in the hull's angular frame
                        let pmid = 0.5 * (mt[0] + mt[1]);
                        let shift = mid + angle_diff(pmid, mid) - pmid;
                        (
                            [mr[0].sqrt(), mr[1].sqrt()],
                            [0.5 * (mt[0] + shift) + add, 0.5 * (mt[1] + shift) + add],
                        )
                    })
                    .collect();
                let mut root = Complex64::from_polar(t_anchor.norm().sqrt(), 0.5 * ref_angle);
                if neg {
                    root = -root;
                }
                self.signs.push(neg);
                self.refs.push(ref_angle);
                self.walk(target, &next, root, d_hi * step_hi, depth + 1)?;
                self.signs.pop();
                self.refs.pop();
            }
            Ok(())
        }
    }

    let mut walker = Walker {
        c: map.c,
        seed: &seed,
        theta_span,
        covered: Vec::new(),
        kept: Vec::new(),
        max_maps,
        signs: Vec::new(),
        refs: Vec::new(),
    };
    // split the seed into angular panes once, at the root
    let pane_count = ((2.0 * theta_span) / crate::maps::SECTOR_PANE_WIDTH).ceil() as usize;
    let root_panes: Vec<Pane> = (0..pane_count)
        .map(|k| {
            let a = -theta_span + 2.0 * theta_span * k as f64 / pane_count as f64;
            let b = -theta_span + 2.0 * theta_span * (k + 1) as f64 / pane_count as f64;
            (rho, [a, b])
        })
        .collect();
    // full-tree cost is ~2^(depth+1) node visits per level; cap the total
    let depth_cap = max_return_time.min(22);
    for target in 1..=depth_cap {
        walker.walk(target, &root_panes, anchor_c, 1.0, 0)?;
        if walker.kept.len() >= max_maps {
            break;
        }
    }
    let kept = walker.kept;
    if kept.is_empty() {
        return Err(Error::Julia(
            "no returning branch found; widen the sector or deepen the search".into(),
        ));
    }

    let mut named = Vec::new();
    let mut mass_bound = 0.0;
    for (i, cand) in kept.iter().enumerate() {
        let branch = AnalyticBranch::with_refs(
            map.c,
            anchor_c,
            cand.signs.clone(),
            cand.ref_angles.clone(),
        )?;
        // consistency: the recorded anchor path must match branch evaluation
        let check = branch.eval_c(anchor_c);
        if (check - cand.anchor_path_end).norm() > 1e-6 {
            return Err(Error::Julia(
                "branch bookkeeping mismatch between search and evaluator".into(),
            ));
        }
        mass_bound += cand.d_hi;
        named.push((format!("r{i}"), ConformalMap::Branch(branch)));
    }
    let mut system = GDMSystem::ifs(seed, named)?;
    // point-anchored pressure estimates sharpen markedly when the anchor
    // sits on the Julia set itself
    let beta = map.repelling_fixed_point();
    let beta_pt = Point::new(beta.re, beta.im);
    if system.seeds[0].contains_point(&beta_pt, 0.0) {
        system.set_anchor(0, beta_pt)?;
    } else {
        let near = sample
            .points
            .iter()
            .filter(|p| system.seeds[0].contains_point(p, 0.0))
            .min_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap());
        if let Some(&p) = near {
            system.set_anchor(0, p)?;
        }
    }
    Ok(ReturnSystem {
        c: map.c,
        seed,
        max_return_time: depth_cap,
        system,
        mass_bound,
    })
}

/// Bowen root of a packed return system, with the point-anchor bias of the
/// ratio statistic removed by Aitken extrapolation over cylinder depths.
/// The per-depth roots converge geometrically in the depth; three of them
/// pin the limit far more cheaply than one deeper enumeration would.
pub fn return_system_root(system: &GDMSystem) -> Result<DimensionEstimate> {
    let m = system.alphabet.len().max(1) as u64;
    let mut depth = 1usize;
    let mut nodes = m;
    while depth < 3 {
        let next = nodes.saturating_add(m.saturating_pow(depth as u32 + 1));
        if next > 6_000_000 {
            break;
        }
        nodes = next;
        depth += 1;
    }
    let (roots, mut est) = crate::pressure::bowen_profile(system, 1e-7, depth)?;
    if roots.len() == 3 {
        let (s1, s2, s3) = (roots[0], roots[1], roots[2]);
        let (d1, d2) = (s2 - s1, s3 - s2);
        if d1.abs() > 1e-7 {
            let q = d2 / d1;
            if q > 0.05 && q < 0.85 {
                let extrapolated = s3 + d2 * q / (1.0 - q);
                est.value = extrapolated.clamp(0.0, est.ambient_dim as f64);
            }
        }
    }
    Ok(est)
}

/// Budgeted sup of Bowen roots over a family of inverse-branch systems.
/// Reported as a lower bound for the dimension of the radial Julia set (the
/// supremum definition), never as its value.
pub fn ifs_dimension(map: &QuadraticMap, search_budget: u32) -> Result<DimensionEstimate> {
    if search_budget == 0 {
        return Err(Error::Julia("search budget is zero: no estimate".into()));
    }
    if !map.evidence.is_hyperbolic() {
        return Err(Error::Julia(
            "no hyperbolicity evidence: critical orbit neither escapes nor converges".into(),
        ));
    }
    let mut best: Option<DimensionEstimate> = None;
    let mut consider = |est: DimensionEstimate| match &best {
        Some(b) if b.value >= est.value => {}
        _ => best = Some(est),
    };

    // mixed return-time sector systems: the workhorse
    let t_cap = (6 + 3 * search_budget as usize).min(26);
    let map_cap = (40 + 25 * search_budget as usize).min(140);
    if let Ok(rs) = build_return_system(map, 2.5, t_cap, map_cap) {
        if let Ok(est) = return_system_root(&rs.system) {
            consider(est);
        }
    }

    // single-depth ball systems around sampled Julia points
    let sample = map.sample_julia(64, 0xba11);
    let depth = (4 + search_budget as usize).min(10);
    for k in [0usize, 21, 42] {
        let p = sample.points[k % sample.points.len()];
        let z = Complex64::new(p.x, p.y);
        let radius = 0.45 * map.min_dist_to_critical_orbit(z);
        if !(radius > 1e-3) {
            continue;
        }
        if let Ok(bs) = build_branch_system(map, z, radius, depth) {
            if let Ok(est) = bowen_root_with_budget(&bs.system, 1e-6, 500_000, 6) {
                consider(est);
            }
        }
    }

    let mut est = best.ok_or_else(|| {
        Error::Julia("no candidate branch system produced an estimate".into())
    })?;
    est.method = DimensionMethod::SubsystemSup;
    Ok(est)
}

/// Evidence that `z0` is a radial point: for at least half the orbit times
/// n ≤ horizon, the ball B(f^n(z0), delta) pulls back univalently to z0
/// (certified by critical-value avoidance along the orbit).
#[derive(Debug, Clone)]
pub struct RadialEvidence {
    pub horizon: usize,
    pub hits: usize,
    pub is_radial_evidence: bool,
}

pub fn radial_probe(
    map: &QuadraticMap,
    z0: Complex64,
    horizon: usize,
    delta: f64,
) -> Result<RadialEvidence> {
    if horizon == 0 || delta <= 0.0 {
        return Err(Error::InvalidParameter(
            "horizon >= 1 and delta > 0 required".into(),
        ));
    }
    let escape = map.escape_radius();
    let mut orbit = vec![z0];
    let mut z = z0;
    for _ in 0..horizon {
        z = map.eval(z);
        if z.norm() > escape {
            return Err(Error::Julia(format!(
                "orbit escapes the numeric range at |z| = {:.3}",
                z.norm()
            )));
        }
        orbit.push(z);
    }
    let mut hits = 0usize;
    for n in 1..=horizon {
        // pull B(z_n, delta) back along the orbit to z_0
        let mut rho = delta;
        let mut ok = true;
        for k in (1..=n).rev() {
            let t = orbit[k] - map.c;
            let tn = t.norm();
            if tn - rho <= 0.0 {
                ok = false;
                break;
            }
            let half_ang = 0.5 * (rho / tn).min(1.0).asin();
            rho /= tn.sqrt() + (tn - rho).sqrt() * half_ang.cos();
        }
        if ok {
            hits += 1;
        }
    }
    Ok(RadialEvidence {
        horizon,
        hits,
        is_radial_evidence: 2 * hits >= horizon,
    })
}

/// Max observed preimage multiplicity within one pullback component of
/// B(x, eps), over sampled Julia points and iterate orders up to the cap.
/// Components are tracked by overlapping enclosure balls; a pullback that
/// swallows the critical value merges both square-root children, which is
/// exactly what raises the degree.
pub fn semihyperbolic_probe(map: &QuadraticMap, eps: f64, depth_cap: usize) -> Result<usize> {
    if eps <= 0.0 {
        return Err(Error::InvalidParameter("eps must be positive".into()));
    }
    if depth_cap == 0 {
        return Ok(1);
    }
    if depth_cap > 12 {
        return Err(Error::InvalidParameter(
            "depth cap above 12 is not desk-scale (2^n preimages)".into(),
        ));
    }
    let mut sample = map.sample_julia(16, 0xdeadu64 ^ 0xd3).points;
    // probe the critical value's location when it sits on the Julia set
    let cv = Point::new(map.c.re, map.c.im);
    let cv_dist = sample
        .iter()
        .map(|p| p.dist(&cv))
        .fold(f64::INFINITY, f64::min);
    if cv_dist <= eps {
        sample.push(cv);
    }
    let mut max_degree = 1usize;
    'probe: for x in &sample {
        let x_c = Complex64::new(x.x, x.y);
        // breadth-first preimage tree with enclosure balls
        let mut layer: Vec<(Complex64, f64)> = vec![(x_c, eps)];
        for _ in 0..depth_cap {
            let mut next = Vec::with_capacity(layer.len() * 2);
            for &(z, rho) in &layer {
                if rho > 1.0 {
                    // enclosure blew up: component tracking failed here
                    continue 'probe;
                }
                let t = z - map.c;
                let tn = t.norm();
                if tn <= rho {
                    // ball swallows the critical value: both roots live in one
                    // component; cover them with a single origin-centered ball
                    let r = (tn + rho).sqrt();
                    next.push((Complex64::new(0.0, 0.0), r));
                    next.push((Complex64::new(0.0, 0.0), r));
                    continue;
                }
                let half_ang = 0.5 * (rho / tn).min(1.0).asin();
                let new_rho = rho / (tn.sqrt() + (tn - rho).sqrt() * half_ang.cos());
                let root = t.sqrt();
                next.push((root, new_rho));
                next.push((-root, new_rho));
            }
            layer = next;
            // cluster multiplicity: overlapping enclosures belong to one
            // pullback component
            let n = layer.len();
            let mut cluster = vec![usize::MAX; n];
            let mut degree_here = 1usize;
            for i in 0..n {
                if cluster[i] != usize::MAX {
                    continue;
                }
                let mut size = 1usize;
                cluster[i] = i;
                for j in i + 1..n {
                    if cluster[j] == usize::MAX {
                        let (zi, ri) = layer[i];
                        let (zj, rj) = layer[j];
                        if (zi - zj).norm() <= ri + rj {
                            cluster[j] = i;
                            size += 1;
                        }
                    }
                }
                degree_here = degree_here.max(size);
            }
            max_degree = max_degree.max(degree_here);
        }
    }
    Ok(max_degree)
}
