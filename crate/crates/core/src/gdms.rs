//! The geometric layer: graph directed systems of certified conformal
//! contractions on compact seed regions, with cylinders, the coding map,
//! open-set-condition evidence, and limit-set sampling.

use crate::error::{Error, Result};
use crate::maps::ConformalMap;
use crate::region::{Point, Region};
use crate::symbolic::{
    admissible_words, Alphabet, IncidenceMatrix, SymbolStream, Word, DEFAULT_ENUMERATION_CAP,
};
use crate::util::rng_for_index;
use rand::RngExt;

/// A finite conformal GDMS: per-vertex compact seed regions, per-edge
/// certified contractions, and an incidence matrix. Constructing one runs
/// the certification: every edge must map its domain seed into its target
/// seed, and the per-edge derivative ranges give the global bound `lambda`.
#[derive(Debug, Clone)]
pub struct GDMSystem {
    pub alphabet: Alphabet,
    pub matrix: IncidenceMatrix,
    pub seeds: Vec<Region>,
    pub extensions: Vec<Region>,
    pub maps: Vec<ConformalMap>,
    /// per-vertex evaluation anchors (seed centers unless overridden with a
    /// point known to lie on the limit set)
    pub anchors: Vec<Point>,
    /// certified [min, max] of |φ'_e| over the edge's domain seed
    pub edge_deriv: Vec<(f64, f64)>,
    /// max certified Lipschitz bound over edges (may equal 1 for borderline
    /// systems; operations that need strict contraction check it)
    pub lambda: f64,
    pub dim: usize,
    pub enumeration_cap: u64,
}

/// Admissible word together with a certified enclosure of its cylinder image
/// and two-sided bounds on the word derivative magnitude over the cylinder's
/// domain seed.
#[derive(Debug, Clone)]
pub struct Cylinder {
    pub word: Word,
    pub region: Region,
    pub d_lo: f64,
    pub d_hi: f64,
}

/// Weighted point cloud standing in for a limit set or a measure on it.
#[derive(Debug, Clone)]
pub struct PointSample {
    pub dim: usize,
    pub points: Vec<Point>,
    pub weights: Option<Vec<f64>>,
    pub normalized: bool,
    pub words: Option<Vec<Word>>,
}

impl PointSample {
    pub fn bare(dim: usize, points: Vec<Point>) -> Self {
        Self {
            dim,
            points,
            weights: None,
            normalized: false,
            words: None,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn weight(&self, i: usize) -> f64 {
        match &self.weights {
            Some(w) => w[i],
            None => 1.0 / self.points.len() as f64,
        }
    }
}

/// Outcome of the finite-depth open set condition check. This is numerical
/// evidence on outer enclosures, not a proof: `certified` means every pair of
/// shrunk enclosure interiors was disjoint at this depth.
#[derive(Debug, Clone)]
pub struct OscEvidence {
    pub depth: usize,
    pub certified: bool,
    pub violating: Option<(Word, Word)>,
    pub pairs_checked: usize,
}

/// Composition φ_ω = φ_{ω_1} ∘ … ∘ φ_{ω_n} with chain-rule derivative data.
#[derive(Debug)]
pub struct ComposedMap<'a> {
    pub word: Word,
    steps: Vec<&'a ConformalMap>,
}

impl<'a> ComposedMap<'a> {
    pub fn eval(&self, mut p: Point) -> Point {
        for map in self.steps.iter().rev() {
            p = map.eval(p);
        }
        p
    }

    /// |φ'_ω(p)| by the chain rule.
    pub fn deriv_mag(&self, mut p: Point) -> f64 {
        let mut mag = 1.0;
        for map in self.steps.iter().rev() {
            mag *= map.deriv_mag(p);
            p = map.eval(p);
        }
        mag
    }

    /// Collapse to a single closed-form map when the whole chain supports it.
    pub fn collapse(&self) -> Option<ConformalMap> {
        let mut iter = self.steps.iter().rev();
        let mut acc = (*iter.next()?).clone();
        for outer in iter {
            acc = outer.compose_exact(&acc)?;
        }
        Some(acc)
    }
}

impl GDMSystem {
    pub fn new(
        alphabet: Alphabet,
        matrix: IncidenceMatrix,
        seeds: Vec<Region>,
        maps: Vec<ConformalMap>,
    ) -> Result<Self> {
        if seeds.len() != alphabet.vertices.len() {
            return Err(Error::InvalidParameter(
                "one seed region per vertex required".into(),
            ));
        }
        if maps.len() != alphabet.len() {
            return Err(Error::InvalidParameter("one map per edge required".into()));
        }
        let dim = seeds.first().map(|s| s.dim()).unwrap_or(1);
        if seeds.iter().any(|s| s.dim() != dim) {
            return Err(Error::InvalidParameter(
                "all seed regions must share one ambient dimension".into(),
            ));
        }

        let mut edge_deriv = Vec::with_capacity(maps.len());
        let mut lambda: f64 = 0.0;
        for (e, map) in maps.iter().enumerate() {
            let domain = &seeds[alphabet.terminal[e]];
            let target = &seeds[alphabet.initial[e]];
            let (dlo, dhi) = map.deriv_range(domain)?;
            if dhi > 1.0 + 1e-12 {
                return Err(Error::NotContraction {
                    edge: alphabet.edges[e].clone(),
                    lip: dhi,
                });
            }
            let image = map.image_enclosure(domain)?;
            let tol = 1e-9 * target.diameter().max(1.0);
            if !image.contained_in(target, tol) {
                // how far the enclosure escapes, for the error message
                let (ci, ri) = image.bounding_ball();
                let (ct, rt) = target.bounding_ball();
                let escape = (ci.dist(&ct) + ri - rt).max(0.0);
                return Err(Error::SeedNotInvariant {
                    edge: alphabet.edges[e].clone(),
                    escape,
                });
            }
            lambda = lambda.max(dhi);
            edge_deriv.push((dlo, dhi));
        }

        let extensions = seeds
            .iter()
            .map(|s| s.inflate(0.5 * s.diameter()))
            .collect();
        let anchors = seeds.iter().map(|s| s.center()).collect();
        Ok(Self {
            alphabet,
            matrix,
            seeds,
            extensions,
            maps,
            anchors,
            edge_deriv,
            lambda,
            dim,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
        })
    }

    /// Single-vertex IFS over one seed region.
    pub fn ifs(seed: Region, named_maps: Vec<(String, ConformalMap)>) -> Result<Self> {
        let names: Vec<String> = named_maps.iter().map(|(n, _)| n.clone()).collect();
        let maps: Vec<ConformalMap> = named_maps.into_iter().map(|(_, m)| m).collect();
        let alphabet = Alphabet::ifs(names);
        let matrix = IncidenceMatrix::maximal(&alphabet);
        Self::new(alphabet, matrix, vec![seed], maps)
    }

    pub fn require_contracting(&self) -> Result<()> {
        if self.lambda < 1.0 {
            Ok(())
        } else {
            Err(Error::NotUniformlyContracting {
                lambda: self.lambda,
            })
        }
    }

    pub fn max_seed_diameter(&self) -> f64 {
        self.seeds.iter().map(|s| s.diameter()).fold(0.0, f64::max)
    }

    /// φ_ω for a nonempty admissible word.
    pub fn compose(&self, word: &Word) -> Result<ComposedMap<'_>> {
        if word.is_empty() {
            return Err(Error::EmptyWord);
        }
        word.check_admissible(&self.matrix, &self.alphabet)?;
        Ok(ComposedMap {
            word: word.clone(),
            steps: word.letters.iter().map(|&e| &self.maps[e]).collect(),
        })
    }

    /// Anchor point used for cylinder and sampling evaluations.
    pub fn anchor(&self, vertex: usize) -> Point {
        self.anchors[vertex]
    }

    /// Override a vertex anchor with a point inside its seed (for example a
    /// known limit-set point, which sharpens point-anchored estimates).
    pub fn set_anchor(&mut self, vertex: usize, p: Point) -> Result<()> {
        if !self.seeds[vertex].contains_point(&p, 1e-12) {
            return Err(Error::InvalidParameter(
                "anchor must lie inside the vertex seed".into(),
            ));
        }
        self.anchors[vertex] = p;
        Ok(())
    }

    /// The coding point π(ω) to within `tol`, by iterating until the
    /// contraction bound closes below the tolerance.
    pub fn coding_point(&self, stream: &mut SymbolStream<'_>, tol: f64) -> Result<Point> {
        if tol <= 0.0 {
            return Err(Error::InvalidParameter("tol must be positive".into()));
        }
        self.require_contracting()?;
        let diam = self.max_seed_diameter();
        let mut n = 1usize;
        let mut scale = self.lambda;
        while scale * diam > tol && n < 10_000 {
            scale *= self.lambda;
            n += 1;
        }
        let word = stream.prefix(n)?;
        let map = self.compose(&word)?;
        let anchor = self.anchor(self.alphabet.terminal[*word.letters.last().unwrap()]);
        Ok(map.eval(anchor))
    }

    /// Certified cylinder data for an admissible word: outer enclosure of
    /// φ_ω(X_{t(ω)}) and two-sided derivative bounds, computed by chaining
    /// image enclosures letter by letter (exact for similarities).
    pub fn cylinder(&self, word: &Word) -> Result<Cylinder> {
        if word.is_empty() {
            return Err(Error::EmptyWord);
        }
        word.check_admissible(&self.matrix, &self.alphabet)?;
        let mut region = self.seeds[self.alphabet.terminal[*word.letters.last().unwrap()]];
        let (mut d_lo, mut d_hi) = (1.0, 1.0);
        for &e in word.letters.iter().rev() {
            let (lo, hi) = self.maps[e].deriv_range(&region)?;
            d_lo *= lo;
            d_hi *= hi;
            region = self.maps[e].image_enclosure(&region)?;
        }
        Ok(Cylinder {
            word: word.clone(),
            region,
            d_lo,
            d_hi,
        })
    }

    /// Finite-depth open set condition evidence: enclosures of all distinct
    /// same-initial-vertex cylinders of length `n`, shrunk by `tol`, must
    /// have pairwise disjoint interiors.
    pub fn check_osc(&self, n: usize, tol: f64) -> Result<OscEvidence> {
        if n == 0 {
            return Err(Error::InvalidParameter("osc depth must be >= 1".into()));
        }
        let words = admissible_words(&self.matrix, &self.alphabet, n, self.enumeration_cap)?;
        let cylinders: Vec<Cylinder> = words
            .iter()
            .map(|w| self.cylinder(w))
            .collect::<Result<_>>()?;
        let mut pairs = 0usize;
        for i in 0..cylinders.len() {
            for j in i + 1..cylinders.len() {
                let wi = &cylinders[i].word;
                let wj = &cylinders[j].word;
                if wi.initial_vertex(&self.alphabet) != wj.initial_vertex(&self.alphabet) {
                    continue;
                }
                pairs += 1;
                if !cylinders[i]
                    .region
                    .interiors_disjoint(&cylinders[j].region, tol)
                {
                    return Ok(OscEvidence {
                        depth: n,
                        certified: false,
                        violating: Some((wi.clone(), wj.clone())),
                        pairs_checked: pairs,
                    });
                }
            }
        }
        Ok(OscEvidence {
            depth: n,
            certified: true,
            violating: None,
            pairs_checked: pairs,
        })
    }

    fn random_word(&self, depth: usize, idx: u64, seed: u64) -> Result<Word> {
        let mut rng = rng_for_index(seed, idx);
        let m = self.alphabet.len();
        let mut letters = Vec::with_capacity(depth);
        let first = rng.random_range(0..m);
        letters.push(first);
        for _ in 1..depth {
            let prev = *letters.last().unwrap();
            let succ: Vec<usize> = (0..m).filter(|&f| self.matrix.entry(prev, f)).collect();
            if succ.is_empty() {
                return Err(Error::InvalidParameter(format!(
                    "edge `{}` has no admissible successor",
                    self.alphabet.edges[prev]
                )));
            }
            letters.push(succ[rng.random_range(0..succ.len())]);
        }
        Ok(Word::new(letters))
    }

    /// Random admissible depth-`depth` words, coded to points. Deterministic
    /// given `seed` (per-index RNG streams, so sharding cannot reorder it).
    /// With `exponent` set, weights are proportional to d_hi^s of each
    /// word's cylinder; otherwise uniform.
    pub fn sample_limit_set(
        &self,
        count: usize,
        depth: usize,
        seed: u64,
        exponent: Option<f64>,
    ) -> Result<PointSample> {
        self.require_contracting()?;
        if depth == 0 {
            return Err(Error::InvalidParameter("sample depth must be >= 1".into()));
        }
        let mut points = Vec::with_capacity(count);
        let mut words = Vec::with_capacity(count);
        let mut raw_weights = Vec::with_capacity(count);
        for idx in 0..count {
            let word = self.random_word(depth, idx as u64, seed)?;
            let map = self.compose(&word)?;
            let anchor = self.anchor(self.alphabet.terminal[*word.letters.last().unwrap()]);
            points.push(map.eval(anchor));
            if let Some(s) = exponent {
                let cyl = self.cylinder(&word)?;
                raw_weights.push(cyl.d_hi.powf(s));
            }
            words.push(word);
        }
        let weights = if exponent.is_some() {
            let total: f64 = raw_weights.iter().sum();
            Some(raw_weights.iter().map(|w| w / total).collect())
        } else {
            None
        };
        Ok(PointSample {
            dim: self.dim,
            points,
            weights,
            normalized: true,
            words: Some(words),
        })
    }

    /// Deterministic cylinder cloud: every admissible word of length `depth`,
    /// coded to its cylinder anchor image. With `exponent` set, weights are
    /// proportional to d_hi^s; otherwise uniform. Equal-ratio systems with
    /// uniform weights give the natural cylinder measure.
    pub fn cylinder_sample(&self, depth: usize, exponent: Option<f64>) -> Result<PointSample> {
        let words = admissible_words(&self.matrix, &self.alphabet, depth, self.enumeration_cap)?;
        let mut points = Vec::with_capacity(words.len());
        let mut raw_weights = Vec::with_capacity(words.len());
        for word in &words {
            let map = self.compose(word)?;
            let anchor = self.anchor(self.alphabet.terminal[*word.letters.last().unwrap()]);
            points.push(map.eval(anchor));
            if let Some(s) = exponent {
                let cyl = self.cylinder(word)?;
                raw_weights.push(cyl.d_hi.powf(s));
            }
        }
        let weights = if exponent.is_some() {
            let total: f64 = raw_weights.iter().sum();
            Some(raw_weights.iter().map(|w| w / total).collect())
        } else {
            None
        };
        Ok(PointSample {
            dim: self.dim,
            points,
            weights,
            normalized: true,
            words: Some(words),
        })
    }

    /// The sub-GDMS on a subset of edges (seeds and incidence restricted).
    pub fn subsystem(&self, edge_indices: &[usize]) -> Result<GDMSystem> {
        let mut names = Vec::new();
        let mut initial = Vec::new();
        let mut terminal = Vec::new();
        let mut maps = Vec::new();
        for &e in edge_indices {
            if e >= self.alphabet.len() {
                return Err(Error::UnknownEdge(format!("index {e}")));
            }
            names.push(self.alphabet.edges[e].clone());
            initial.push(self.alphabet.initial[e]);
            terminal.push(self.alphabet.terminal[e]);
            maps.push(self.maps[e].clone());
        }
        let alphabet = Alphabet::new(self.alphabet.vertices.clone(), names, initial, terminal)?;
        let mut pairs = Vec::new();
        for (a, &e) in edge_indices.iter().enumerate() {
            for (b, &f) in edge_indices.iter().enumerate() {
                if self.matrix.entry(e, f) {
                    pairs.push((a, b));
                }
            }
        }
        let matrix = IncidenceMatrix::new(&alphabet, &pairs)?;
        GDMSystem::new(alphabet, matrix, self.seeds.clone(), maps)
    }
}

/// Bundled classical systems used by fixtures and tests.
pub mod systems {
    use super::*;
    use crate::maps::{Moebius, Similarity};

    /// Middle-thirds Cantor IFS on [0, 1].
    pub fn cantor_thirds() -> GDMSystem {
        GDMSystem::ifs(
            Region::interval(0.0, 1.0),
            vec![
                (
                    "c0".into(),
                    ConformalMap::Similarity(Similarity::line(1.0 / 3.0, false, 0.0)),
                ),
                (
                    "c1".into(),
                    ConformalMap::Similarity(Similarity::line(1.0 / 3.0, false, 2.0 / 3.0)),
                ),
            ],
        )
        .expect("cantor system certifies")
    }

    /// Continued-fraction IFS with digit set `ks`, on the forward-invariant
    /// seed [1/(k_max + 1), 1] so the Lipschitz bound is strictly below 1.
    pub fn gauss_ifs(ks: &[u32]) -> Result<GDMSystem> {
        if ks.is_empty() {
            return Err(Error::InvalidParameter("empty digit set".into()));
        }
        let kmax = *ks.iter().max().unwrap();
        let seed = Region::interval(1.0 / (kmax as f64 + 1.0), 1.0);
        let maps = ks
            .iter()
            .map(|&k| (format!("g{k}"), ConformalMap::Moebius(Moebius::gauss(k))))
            .collect();
        GDMSystem::ifs(seed, maps)
    }

    /// Three half-scale similarities toward the corners of a triangle, on a
    /// box seed so the depth-1 images certify as disjoint rectangles.
    pub fn sierpinski() -> GDMSystem {
        let h = 3f64.sqrt() / 2.0;
        let seed = Region::rect(Point::new(0.0, 0.0), Point::new(1.0, h));
        let corners = [
            Point::new(0.0, 0.0),
            Point::new(0.5, 0.0),
            Point::new(0.25, h / 2.0),
        ];
        let maps = corners
            .iter()
            .enumerate()
            .map(|(i, &t)| {
                (
                    format!("s{i}"),
                    ConformalMap::Similarity(Similarity::plane(0.5, 0.0, false, t)),
                )
            })
            .collect();
        GDMSystem::ifs(seed, maps).expect("sierpinski system certifies")
    }

    /// Decimal Cantor set: digits {0, 9} in base 10.
    pub fn decimal_cantor() -> GDMSystem {
        GDMSystem::ifs(
            Region::interval(0.0, 1.0),
            vec![
                (
                    "d0".into(),
                    ConformalMap::Similarity(Similarity::line(0.1, false, 0.0)),
                ),
                (
                    "d9".into(),
                    ConformalMap::Similarity(Similarity::line(0.1, false, 0.9)),
                ),
            ],
        )
        .expect("decimal cantor certifies")
    }
}

#[cfg(test)]
mod tests {
    use super::systems::*;
    use super::*;
    use crate::maps::Similarity;

    #[test]
    fn compose_cantor_word() {
        let sys = cantor_thirds();
        let word = Word::new(vec![1, 0]); // (c1, c0)
        let map = sys.compose(&word).unwrap();
        // φ_1 ∘ φ_0 : x ↦ x/9 + 2/3
        for &x in &[0.0, 0.5, 1.0] {
            let y = map.eval(Point::new(x, 0.0)).x;
            assert!((y - (x / 9.0 + 2.0 / 3.0)).abs() < 1e-15);
        }
        let collapsed = map.collapse().unwrap();
        if let ConformalMap::Similarity(s) = collapsed {
            assert!((s.ratio - 1.0 / 9.0).abs() < 1e-15);
            assert!((s.translate.x - 2.0 / 3.0).abs() < 1e-15);
        } else {
            panic!("expected a similarity");
        }
    }

    #[test]
    fn compose_single_letter_is_identity_of_composition() {
        let sys = cantor_thirds();
        let word = Word::new(vec![1]);
        let map = sys.compose(&word).unwrap();
        for &x in &[0.0, 0.3, 1.0] {
            assert_eq!(
                map.eval(Point::new(x, 0.0)).x,
                sys.maps[1].eval(Point::new(x, 0.0)).x
            );
        }
    }

    #[test]
    fn compose_rejects_inadmissible() {
        let sys = cantor_thirds();
        // build a swap-matrix variant to get a rejection
        let alphabet = sys.alphabet.clone();
        let matrix = IncidenceMatrix::new(&alphabet, &[(0, 1), (1, 0)]).unwrap();
        let restricted =
            GDMSystem::new(alphabet, matrix, sys.seeds.clone(), sys.maps.clone()).unwrap();
        let err = restricted.compose(&Word::new(vec![0, 0])).unwrap_err();
        assert!(matches!(err, Error::InadmissibleWord { index: 0, .. }));
    }

    #[test]
    fn coding_points_of_streams() {
        let sys = cantor_thirds();
        let mut s0 = SymbolStream::periodic(&sys.matrix, &sys.alphabet, vec![0]).unwrap();
        let p = sys.coding_point(&mut s0, 1e-12).unwrap();
        assert!(p.x.abs() <= 1e-12);

        let mut s1 = SymbolStream::periodic(&sys.matrix, &sys.alphabet, vec![1]).unwrap();
        let p = sys.coding_point(&mut s1, 1e-12).unwrap();
        assert!((p.x - 1.0).abs() <= 1e-12);

        // alternating (1,0,1,0,…) codes the fixed point of φ_1 ∘ φ_0
        let mut alt = SymbolStream::periodic(&sys.matrix, &sys.alphabet, vec![1, 0]).unwrap();
        let p = sys.coding_point(&mut alt, 1e-12).unwrap();
        assert!((p.x - 0.75).abs() <= 1e-12, "fixed point of x/9 + 2/3");
    }

    #[test]
    fn coding_point_tolerance_consistency() {
        let sys = gauss_ifs(&[1, 2]).unwrap();
        for tol in [1e-4, 1e-6, 1e-8] {
            let mut a = SymbolStream::periodic(&sys.matrix, &sys.alphabet, vec![0, 1, 1]).unwrap();
            let mut b = SymbolStream::periodic(&sys.matrix, &sys.alphabet, vec![0, 1, 1]).unwrap();
            let pa = sys.coding_point(&mut a, tol).unwrap();
            let pb = sys.coding_point(&mut b, tol / 10.0).unwrap();
            assert!((pa.x - pb.x).abs() <= tol);
        }
    }

    #[test]
    fn cantor_cylinder_exact() {
        let sys = cantor_thirds();
        let cyl = sys.cylinder(&Word::new(vec![0, 0])).unwrap();
        match cyl.region {
            Region::Interval { lo, hi } => {
                assert!(lo.abs() < 1e-15 && (hi - 1.0 / 9.0).abs() < 1e-15);
            }
            _ => panic!(),
        }
        assert!((cyl.d_lo - 1.0 / 9.0).abs() < 1e-15);
        assert!((cyl.d_hi - 1.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn gauss_full_interval_cylinder_bounds() {
        // φ_k on the full [0,1] seed: |φ'_1| ranges over [1/4, 1]; the system
        // is borderline (lambda = 1) so only cylinder data is exercised
        let seed = Region::interval(0.0, 1.0);
        let sys = GDMSystem::ifs(
            seed,
            vec![
                (
                    "g1".into(),
                    ConformalMap::Moebius(crate::maps::Moebius::gauss(1)),
                ),
                (
                    "g2".into(),
                    ConformalMap::Moebius(crate::maps::Moebius::gauss(2)),
                ),
            ],
        )
        .unwrap();
        assert!((sys.lambda - 1.0).abs() < 1e-12);
        assert!(sys.require_contracting().is_err());
        let cyl = sys.cylinder(&Word::new(vec![0])).unwrap();
        assert!((cyl.d_lo - 0.25).abs() < 1e-15);
        assert!((cyl.d_hi - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cylinder_diameter_contraction_and_nesting() {
        let sys = gauss_ifs(&[1, 2]).unwrap();
        let diam = sys.max_seed_diameter();
        for letters in [vec![0], vec![0, 1], vec![0, 1, 1], vec![0, 1, 1, 0]] {
            let n = letters.len();
            let cyl = sys.cylinder(&Word::new(letters.clone())).unwrap();
            assert!(cyl.region.diameter() <= sys.lambda.powi(n as i32) * diam + 1e-12);
            assert!(cyl.d_lo <= cyl.d_hi);
            if n > 1 {
                let parent = sys
                    .cylinder(&Word::new(letters[..n - 1].to_vec()))
                    .unwrap();
                assert!(
                    cyl.region.contained_in(&parent.region, 1e-9),
                    "cylinders nest"
                );
            }
        }
    }

    #[test]
    fn osc_evidence() {
        let cantor = cantor_thirds();
        assert!(cantor.check_osc(3, 1e-12).unwrap().certified);

        let gauss = gauss_ifs(&[1, 2]).unwrap();
        assert!(gauss.check_osc(2, 1e-12).unwrap().certified);

        let overlap = GDMSystem::ifs(
            Region::interval(0.0, 1.0),
            vec![
                (
                    "h0".into(),
                    ConformalMap::Similarity(Similarity::line(0.5, false, 0.0)),
                ),
                (
                    "h1".into(),
                    ConformalMap::Similarity(Similarity::line(0.5, false, 0.25)),
                ),
            ],
        )
        .unwrap();
        let ev = overlap.check_osc(1, 1e-12).unwrap();
        assert!(!ev.certified);
        let (w1, w2) = ev.violating.unwrap();
        assert_eq!((w1.letters[0], w2.letters[0]), (0, 1));
    }

    #[test]
    fn sierpinski_osc_certifies_on_boxes() {
        let sys = sierpinski();
        assert!(sys.check_osc(1, 1e-12).unwrap().certified);
        assert!(sys.check_osc(3, 1e-12).unwrap().certified);
    }

    #[test]
    fn sampling_is_deterministic_and_contained() {
        let sys = cantor_thirds();
        let a = sys.sample_limit_set(64, 12, 7, None).unwrap();
        let b = sys.sample_limit_set(64, 12, 7, None).unwrap();
        assert_eq!(a.points, b.points);
        for p in &a.points {
            assert!((0.0..=1.0).contains(&p.x));
        }
        // every point lies in the cylinder of its word
        let words = a.words.as_ref().unwrap();
        for (p, w) in a.points.iter().zip(words) {
            let cyl = sys.cylinder(w).unwrap();
            assert!(cyl.region.contains_point(p, 1e-12));
        }
        let empty = sys.sample_limit_set(0, 12, 7, None).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn sierpinski_sample_within_contraction_bound() {
        let sys = sierpinski();
        let sample = sys.sample_limit_set(128, 10, 3, None).unwrap();
        // depth-10 points sit within 2^-10 · diam of the attractor, hence
        // well inside the seed box
        let h = 3f64.sqrt() / 2.0;
        for p in &sample.points {
            assert!(p.x >= -1e-9 && p.x <= 1.0 + 1e-9);
            assert!(p.y >= -1e-9 && p.y <= h + 1e-9);
        }
    }

    #[test]
    fn subsystem_restricts_edges() {
        let sys = gauss_ifs(&[1, 2, 3]).unwrap();
        let sub = sys.subsystem(&[0, 1]).unwrap();
        assert_eq!(sub.alphabet.len(), 2);
        assert_eq!(sub.alphabet.edges, vec!["g1".to_string(), "g2".to_string()]);
    }

    #[test]
    fn compose_associativity_on_grid() {
        let sys = gauss_ifs(&[1, 2]).unwrap();
        let u = Word::new(vec![0, 1]);
        let v = Word::new(vec![1, 0]);
        let uv = Word::new(vec![0, 1, 1, 0]);
        let m_uv = sys.compose(&uv).unwrap();
        let m_u = sys.compose(&u).unwrap();
        let m_v = sys.compose(&v).unwrap();
        for k in 0..=10 {
            let x = 1.0 / 3.0 + (2.0 / 3.0) * (k as f64) / 10.0;
            let p = Point::new(x, 0.0);
            let direct = m_uv.eval(p);
            let split = m_u.eval(m_v.eval(p));
            assert!((direct.x - split.x).abs() < 1e-10);
        }
    }
}
