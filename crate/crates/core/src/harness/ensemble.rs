use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::RunConfig;
use crate::poly::Polynomial;
use crate::roots::{find_roots, RootSet};
use crate::separation::{delta_value, ZERO_THRESHOLD};

/// One accepted random pair with its roots and `delta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub index: usize,
    pub a: Polynomial,
    pub b: Polynomial,
    pub roots_a: RootSet,
    pub roots_b: RootSet,
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rejection {
    DeltaBelowFloor,
    RootsUnverified,
    CommonRoot,
}

impl Rejection {
    pub fn label(self) -> &'static str {
        match self {
            Rejection::DeltaBelowFloor => "delta_below_floor",
            Rejection::RootsUnverified => "roots_unverified",
            Rejection::CommonRoot => "common_root",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Draw {
    pub requested: usize,
    pub instances: Vec<Instance>,
    pub rejections: BTreeMap<String, usize>,
}

/// Independent stream per instance, so results do not depend on scheduling.
pub fn instance_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

pub fn unit_disk_point<R: Rng>(rng: &mut R) -> Complex64 {
    let r = rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, TAU * rng.gen::<f64>())
}

/// Coefficients uniform in the closed unit disk, so `||P|| <= 1`.
pub fn random_polynomial<R: Rng>(rng: &mut R, degree: usize) -> Polynomial {
    loop {
        let coeffs: Vec<Complex64> = (0..=degree).map(|_| unit_disk_point(rng)).collect();
        let p = Polynomial::new(coeffs);
        if p.degree() == degree {
            return p;
        }
    }
}

/// Candidate `index` of the ensemble described by `cfg`.
pub fn candidate(cfg: &RunConfig, index: usize) -> Result<Instance, Rejection> {
    let mut rng = instance_rng(cfg.seed, index);
    let n = rng.gen_range(cfg.degree_min..=cfg.degree_max);
    let k = rng.gen_range(cfg.degree_min..=cfg.degree_max);
    let a = random_polynomial(&mut rng, n);
    let b = random_polynomial(&mut rng, k);
    let roots_a = find_roots(&a).map_err(|_| Rejection::RootsUnverified)?;
    let roots_b = find_roots(&b).map_err(|_| Rejection::RootsUnverified)?;
    if !roots_a.verified || !roots_b.verified {
        return Err(Rejection::RootsUnverified);
    }
    let (delta, _) = delta_value(&a, &b, &roots_a, &roots_b);
    if delta <= ZERO_THRESHOLD {
        return Err(Rejection::CommonRoot);
    }
    if delta < cfg.delta_floor {
        return Err(Rejection::DeltaBelowFloor);
    }
    Ok(Instance {
        index,
        a,
        b,
        roots_a,
        roots_b,
        delta,
    })
}

/// Exactly `cfg.ensemble_size` candidates; rejected ones are counted.
pub fn draw(cfg: &RunConfig) -> Draw {
    let outcomes: Vec<_> = (0..cfg.ensemble_size)
        .into_par_iter()
        .map(|i| candidate(cfg, i))
        .collect();
    let mut rejections = BTreeMap::new();
    let mut instances = Vec::new();
    for o in outcomes {
        match o {
            Ok(inst) => instances.push(inst),
            Err(r) => *rejections.entry(r.label().to_string()).or_insert(0) += 1,
        }
    }
    Draw {
        requested: cfg.ensemble_size,
        instances,
        rejections,
    }
}

/// Keeps drawing until `target` candidates have been accepted, giving up
/// (with fewer instances) after `1000 * target + 10_000` candidates.
pub fn draw_accepted(cfg: &RunConfig, target: usize) -> Vec<Instance> {
    let limit = 1000 * target + 10_000;
    let mut out = Vec::with_capacity(target);
    let mut next = 0;
    while out.len() < target && next < limit {
        let chunk = (target - out.len()) * 2 + 8;
        let batch: Vec<_> = (next..next + chunk)
            .into_par_iter()
            .filter_map(|i| candidate(cfg, i).ok())
            .collect();
        next += chunk;
        out.extend(batch);
    }
    out.truncate(target);
    out
}
