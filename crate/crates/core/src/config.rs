//! On-disk system schema: versioned JSON with explicit seed regions, map
//! descriptors, and incidence. All numerics are decimal text at full
//! round-trip precision, and emission is field-ordered, so configs are
//! reproducible byte for byte.

use crate::error::{Error, Result};
use crate::gdms::GDMSystem;
use crate::maps::{AnalyticBranch, ConformalMap, Moebius, Similarity};
use crate::region::{Point, Region};
use crate::symbolic::{Alphabet, IncidenceMatrix};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionConfig {
    Interval { lo: f64, hi: f64 },
    Ball { center: [f64; 2], radius: f64 },
    Box { min: [f64; 2], max: [f64; 2] },
    Sector { rho: [f64; 2], theta: [f64; 2] },
}

impl RegionConfig {
    pub fn to_region(&self) -> Result<Region> {
        Ok(match *self {
            RegionConfig::Interval { lo, hi } => {
                if lo > hi {
                    return Err(Error::Config(format!("interval [{lo}, {hi}] inverted")));
                }
                Region::Interval { lo, hi }
            }
            RegionConfig::Ball { center, radius } => {
                if radius <= 0.0 {
                    return Err(Error::Config("ball radius must be positive".into()));
                }
                Region::Ball {
                    center: Point::new(center[0], center[1]),
                    radius,
                }
            }
            RegionConfig::Box { min, max } => {
                if min[0] > max[0] || min[1] > max[1] {
                    return Err(Error::Config("box corners inverted".into()));
                }
                Region::Rect {
                    min: Point::new(min[0], min[1]),
                    max: Point::new(max[0], max[1]),
                }
            }
            RegionConfig::Sector { rho, theta } => {
                if !(rho[0] > 0.0 && rho[0] <= rho[1]) {
                    return Err(Error::Config("sector radial interval invalid".into()));
                }
                Region::Sector { rho, theta }
            }
        })
    }

    pub fn from_region(r: &Region) -> Self {
        match *r {
            Region::Interval { lo, hi } => RegionConfig::Interval { lo, hi },
            Region::Ball { center, radius } => RegionConfig::Ball {
                center: [center.x, center.y],
                radius,
            },
            Region::Rect { min, max } => RegionConfig::Box {
                min: [min.x, min.y],
                max: [max.x, max.y],
            },
            Region::Sector { rho, theta } => RegionConfig::Sector { rho, theta },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexConfig {
    pub name: String,
    pub seed: RegionConfig,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub extension: Option<RegionConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapConfig {
    Similarity {
        ratio: f64,
        #[serde(default)]
        rotation_deg: f64,
        #[serde(default)]
        reflect: bool,
        translate: Vec<f64>,
    },
    Moebius {
        a: [f64; 2],
        b: [f64; 2],
        c: [f64; 2],
        d: [f64; 2],
    },
    Gauss {
        k: u32,
    },
    AnalyticBranch {
        c: [f64; 2],
        /// square-root sign choices, innermost first (1 = negative root)
        signs: Vec<u8>,
        anchor: [f64; 2],
        ref_angles: Vec<f64>,
        /// Newton-refined fixed point, stored as a reconstruction seed
        fixed_point: [f64; 2],
    },
}

impl MapConfig {
    pub fn to_map(&self, dim: usize) -> Result<ConformalMap> {
        Ok(match self {
            MapConfig::Similarity {
                ratio,
                rotation_deg,
                reflect,
                translate,
            } => {
                if !(*ratio > 0.0) {
                    return Err(Error::Config(format!("ratio {ratio} must be positive")));
                }
                if *ratio > 1.0 {
                    return Err(Error::Config(format!(
                        "similarity ratio {ratio} is not a contraction"
                    )));
                }
                if dim == 1 {
                    let t = *translate.first().unwrap_or(&0.0);
                    ConformalMap::Similarity(Similarity::line(*ratio, *reflect, t))
                } else {
                    if translate.len() != 2 {
                        return Err(Error::Config(
                            "planar similarity needs a 2-vector translation".into(),
                        ));
                    }
                    ConformalMap::Similarity(Similarity::plane(
                        *ratio,
                        *rotation_deg,
                        *reflect,
                        Point::new(translate[0], translate[1]),
                    ))
                }
            }
            MapConfig::Moebius { a, b, c, d } => ConformalMap::Moebius(Moebius::new(
                Complex64::new(a[0], a[1]),
                Complex64::new(b[0], b[1]),
                Complex64::new(c[0], c[1]),
                Complex64::new(d[0], d[1]),
            )?),
            MapConfig::Gauss { k } => {
                if *k == 0 {
                    return Err(Error::Config("gauss index k must be >= 1".into()));
                }
                ConformalMap::Moebius(Moebius::gauss(*k))
            }
            MapConfig::AnalyticBranch {
                c,
                signs,
                anchor,
                ref_angles,
                ..
            } => ConformalMap::Branch(AnalyticBranch::with_refs(
                Complex64::new(c[0], c[1]),
                Complex64::new(anchor[0], anchor[1]),
                signs.iter().map(|&s| s != 0).collect(),
                ref_angles.clone(),
            )?),
        })
    }

    pub fn from_map(map: &ConformalMap) -> Self {
        match map {
            ConformalMap::Similarity(s) => MapConfig::Similarity {
                ratio: s.ratio,
                rotation_deg: s.rotation_deg,
                reflect: s.reflect,
                translate: if s.dim == 1 {
                    vec![s.translate.x]
                } else {
                    vec![s.translate.x, s.translate.y]
                },
            },
            ConformalMap::Moebius(m) => {
                // the continued-fraction generators round-trip as gauss
                if m.is_real()
                    && m.a.re == 0.0
                    && m.b.re == 1.0
                    && m.c.re == 1.0
                    && m.d.re >= 1.0
                    && m.d.re.fract() == 0.0
                {
                    MapConfig::Gauss { k: m.d.re as u32 }
                } else {
                    MapConfig::Moebius {
                        a: [m.a.re, m.a.im],
                        b: [m.b.re, m.b.im],
                        c: [m.c.re, m.c.im],
                        d: [m.d.re, m.d.im],
                    }
                }
            }
            ConformalMap::Branch(b) => MapConfig::AnalyticBranch {
                c: [b.c.re, b.c.im],
                signs: b.signs.iter().map(|&s| u8::from(s)).collect(),
                anchor: [b.anchor.re, b.anchor.im],
                ref_angles: b.ref_angles.clone(),
                fixed_point: [b.fixed_point.re, b.fixed_point.im],
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeConfig {
    pub name: String,
    /// image vertex i(e)
    pub i: String,
    /// domain vertex t(e)
    pub t: String,
    pub map: MapConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IncidenceConfig {
    Keyword(String),
    Pairs { pairs: Vec<(String, String)> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub version: u32,
    pub dim: usize,
    pub vertices: Vec<VertexConfig>,
    pub edges: Vec<EdgeConfig>,
    pub incidence: IncidenceConfig,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub filtration: Option<Vec<Vec<String>>>,
}

/// A parsed and revalidated system plus the raw schema it came from.
#[derive(Debug, Clone)]
pub struct LoadedSystem {
    pub system: GDMSystem,
    pub config: SystemConfig,
    /// edge-index filtration, when the config declares one
    pub filtration: Option<Vec<Vec<usize>>>,
}

pub fn from_config(config: &SystemConfig) -> Result<LoadedSystem> {
    if config.version != SCHEMA_VERSION {
        return Err(Error::Config(format!(
            "unsupported schema version {} (expected {SCHEMA_VERSION})",
            config.version
        )));
    }
    if config.dim != 1 && config.dim != 2 {
        return Err(Error::Config("dim must be 1 or 2".into()));
    }
    if config.vertices.is_empty() || config.edges.is_empty() {
        return Err(Error::Config("need at least one vertex and one edge".into()));
    }
    let vertex_names: Vec<String> = config.vertices.iter().map(|v| v.name.clone()).collect();
    let seeds: Vec<Region> = config
        .vertices
        .iter()
        .map(|v| v.seed.to_region())
        .collect::<Result<_>>()?;
    for s in &seeds {
        if s.dim() != config.dim {
            return Err(Error::Config(format!(
                "seed region {s:?} does not match dim {}",
                config.dim
            )));
        }
    }
    let vidx = |name: &str| -> Result<usize> {
        vertex_names
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    };
    let mut edge_names = Vec::new();
    let mut initial = Vec::new();
    let mut terminal = Vec::new();
    let mut maps = Vec::new();
    for e in &config.edges {
        edge_names.push(e.name.clone());
        initial.push(vidx(&e.i)?);
        terminal.push(vidx(&e.t)?);
        maps.push(e.map.to_map(config.dim)?);
    }
    let alphabet = Alphabet::new(vertex_names, edge_names, initial, terminal)?;
    let matrix = match &config.incidence {
        IncidenceConfig::Keyword(k) if k == "full" => IncidenceMatrix::maximal(&alphabet),
        IncidenceConfig::Keyword(k) => {
            return Err(Error::Config(format!(
                "unknown incidence keyword `{k}` (expected \"full\" or explicit pairs)"
            )))
        }
        IncidenceConfig::Pairs { pairs } => {
            let mut idx_pairs = Vec::with_capacity(pairs.len());
            for (e, f) in pairs {
                idx_pairs.push((alphabet.edge_index(e)?, alphabet.edge_index(f)?));
            }
            IncidenceMatrix::new(&alphabet, &idx_pairs)?
        }
    };
    let mut system = GDMSystem::new(alphabet, matrix, seeds, maps)?;
    for (v, vc) in config.vertices.iter().enumerate() {
        if let Some(ext) = &vc.extension {
            let ext = ext.to_region()?;
            if !system.seeds[v].contained_in(&ext, 1e-12) {
                return Err(Error::Config(format!(
                    "extension of vertex `{}` does not contain its seed",
                    vc.name
                )));
            }
            system.extensions[v] = ext;
        }
    }

    let filtration = match &config.filtration {
        None => None,
        Some(sets) => {
            let mut out = Vec::with_capacity(sets.len());
            for set in sets {
                let mut idx = Vec::with_capacity(set.len());
                for name in set {
                    idx.push(system.alphabet.edge_index(name)?);
                }
                out.push(idx);
            }
            Some(out)
        }
    };
    Ok(LoadedSystem {
        system,
        config: config.clone(),
        filtration,
    })
}

pub fn to_config(system: &GDMSystem) -> SystemConfig {
    let vertices = system
        .alphabet
        .vertices
        .iter()
        .enumerate()
        .map(|(v, name)| VertexConfig {
            name: name.clone(),
            seed: RegionConfig::from_region(&system.seeds[v]),
            extension: Some(RegionConfig::from_region(&system.extensions[v])),
        })
        .collect();
    let edges = system
        .alphabet
        .edges
        .iter()
        .enumerate()
        .map(|(e, name)| EdgeConfig {
            name: name.clone(),
            i: system.alphabet.vertices[system.alphabet.initial[e]].clone(),
            t: system.alphabet.vertices[system.alphabet.terminal[e]].clone(),
            map: MapConfig::from_map(&system.maps[e]),
        })
        .collect();
    // emit explicit pairs unless the matrix is maximal
    let maximal = IncidenceMatrix::maximal(&system.alphabet);
    let incidence = if maximal == system.matrix {
        IncidenceConfig::Keyword("full".into())
    } else {
        let mut pairs = Vec::new();
        for e in 0..system.alphabet.len() {
            for f in 0..system.alphabet.len() {
                if system.matrix.entry(e, f) {
                    pairs.push((
                        system.alphabet.edges[e].clone(),
                        system.alphabet.edges[f].clone(),
                    ));
                }
            }
        }
        IncidenceConfig::Pairs { pairs }
    };
    SystemConfig {
        version: SCHEMA_VERSION,
        dim: system.dim,
        vertices,
        edges,
        incidence,
        filtration: None,
    }
}

pub fn parse_config(path: &Path) -> Result<LoadedSystem> {
    let text = std::fs::read_to_string(path)?;
    let config: SystemConfig = serde_json::from_str(&text)?;
    from_config(&config)
}

pub fn emit_config(config: &SystemConfig) -> String {
    let mut s = serde_json::to_string_pretty(config).expect("schema serializes");
    s.push('\n');
    s
}
