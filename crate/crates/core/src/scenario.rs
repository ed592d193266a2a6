//! Freeway drops: vehicle placement, role selection and slow-fading gains.
//!
//! Vehicles are placed lane by lane with a 1-D Poisson process whose density
//! is set by the speed-dependent headway. CUEs and DUE transmitters are drawn
//! uniformly without replacement, and each DUE receiver is the nearest
//! vehicle to its transmitter that has no role yet. Only slow fading is
//! stored; small-scale fading is sampled where it is needed.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson};
use std::fmt::Write as _;

use crate::channel::{LinkKind, PathLossModel};
use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::seed::derive_seed;

/// Number of fresh vehicle placements tried before giving up on a drop.
pub const MAX_PLACEMENT_ATTEMPTS: u64 = 64;

/// Vehicle positions and the role each one plays in a drop.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    /// `(x, y)` in meters; x runs along the road, y across it.
    pub vehicles: Vec<(f64, f64)>,
    pub bs: (f64, f64),
    pub cue_vehicle: Vec<usize>,
    pub due_tx_vehicle: Vec<usize>,
    pub due_rx_vehicle: Vec<usize>,
}

/// One realization of positions and slow-fading power gains.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioDrop {
    pub seed: u64,
    pub layout: Layout,
    /// CUE m to BS.
    pub cue_bs_gain: Vec<f64>,
    /// DUE k transmitter to its own receiver.
    pub due_gain: Vec<f64>,
    /// `due_cross_gain[j][k]`: DUE j transmitter to DUE k receiver. Diagonal unused (0).
    pub due_cross_gain: Vec<Vec<f64>>,
    /// `cue_due_gain[m][k]`: CUE m to DUE k receiver.
    pub cue_due_gain: Vec<Vec<f64>>,
    /// DUE k transmitter to BS.
    pub due_bs_gain: Vec<f64>,
}

impl ScenarioDrop {
    pub fn cues(&self) -> usize {
        self.cue_bs_gain.len()
    }

    pub fn due_pairs(&self) -> usize {
        self.due_gain.len()
    }

    /// Writes one CSV row per link: `link,from,to,distance_m,gain`.
    pub fn to_csv(&self) -> String {
        let layout = &self.layout;
        let dist = |a: (f64, f64), b: (f64, f64)| (a.0 - b.0).hypot(a.1 - b.1);
        let pos = |v: usize| layout.vehicles[v];
        let mut out = String::from("link,from,to,distance_m,gain\n");
        for (m, &g) in self.cue_bs_gain.iter().enumerate() {
            let d = dist(pos(layout.cue_vehicle[m]), layout.bs);
            let _ = writeln!(out, "cue_bs,cue{m},bs,{d},{g:e}");
        }
        for (k, &g) in self.due_gain.iter().enumerate() {
            let d = dist(pos(layout.due_tx_vehicle[k]), pos(layout.due_rx_vehicle[k]));
            let _ = writeln!(out, "due,due{k}.tx,due{k}.rx,{d},{g:e}");
        }
        for (j, row) in self.due_cross_gain.iter().enumerate() {
            for (k, &g) in row.iter().enumerate() {
                if j == k {
                    continue;
                }
                let d = dist(pos(layout.due_tx_vehicle[j]), pos(layout.due_rx_vehicle[k]));
                let _ = writeln!(out, "due_cross,due{j}.tx,due{k}.rx,{d},{g:e}");
            }
        }
        for (m, row) in self.cue_due_gain.iter().enumerate() {
            for (k, &g) in row.iter().enumerate() {
                let d = dist(pos(layout.cue_vehicle[m]), pos(layout.due_rx_vehicle[k]));
                let _ = writeln!(out, "cue_due,cue{m},due{k}.rx,{d},{g:e}");
            }
        }
        for (k, &g) in self.due_bs_gain.iter().enumerate() {
            let d = dist(pos(layout.due_tx_vehicle[k]), layout.bs);
            let _ = writeln!(out, "due_bs,due{k}.tx,bs,{d},{g:e}");
        }
        out
    }
}

/// Places vehicles on every lane with a Poisson process of the configured density.
pub fn place_vehicles<R: Rng + ?Sized>(config: &SystemConfig, rng: &mut R) -> Vec<(f64, f64)> {
    let mean = config.vehicle_density() * config.road_length_m;
    let count = Poisson::new(mean).expect("positive mean");
    let mut vehicles = Vec::new();
    for lane in 0..config.lanes {
        let n = count.sample(rng) as usize;
        let y = lane as f64 * config.lane_width_m;
        let mut xs: Vec<f64> = (0..n)
            .map(|_| rng.random::<f64>() * config.road_length_m)
            .collect();
        xs.sort_by(f64::total_cmp);
        vehicles.extend(xs.into_iter().map(|x| (x, y)));
    }
    vehicles
}

fn bs_position(config: &SystemConfig) -> (f64, f64) {
    (config.road_length_m / 2.0, -config.bs_offset_m)
}

/// Chooses CUEs and DUE transmitters uniformly, then pairs receivers by proximity.
fn assign_roles<R: Rng + ?Sized>(
    config: &SystemConfig,
    vehicles: Vec<(f64, f64)>,
    rng: &mut R,
) -> Layout {
    let (m, k) = (config.cues, config.due_pairs);
    let picked = sample(rng, vehicles.len(), m + k).into_vec();
    let cue_vehicle = picked[..m].to_vec();
    let due_tx_vehicle = picked[m..].to_vec();
    let mut taken = vec![false; vehicles.len()];
    for &v in &picked {
        taken[v] = true;
    }
    let mut due_rx_vehicle = Vec::with_capacity(k);
    for &tx in &due_tx_vehicle {
        let (tx_x, tx_y) = vehicles[tx];
        let mut best: Option<(f64, usize)> = None;
        for (v, &(x, y)) in vehicles.iter().enumerate() {
            if taken[v] {
                continue;
            }
            let d = (x - tx_x).hypot(y - tx_y);
            // strict comparison keeps the lowest index on ties
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, v));
            }
        }
        let (_, rx) = best.expect("vehicle count checked by caller");
        taken[rx] = true;
        due_rx_vehicle.push(rx);
    }
    Layout {
        vehicles,
        bs: bs_position(config),
        cue_vehicle,
        due_tx_vehicle,
        due_rx_vehicle,
    }
}

/// Computes every slow-fading gain of a layout, sampling shadowing from `rng`.
pub fn gains_for_layout<R: Rng + ?Sized>(
    config: &SystemConfig,
    layout: Layout,
    seed: u64,
    rng: &mut R,
) -> Result<ScenarioDrop> {
    let model = PathLossModel::from_config(config);
    let shadow = |kind: LinkKind| {
        Normal::new(0.0, model.shadow_std_db(kind)).map_err(|e| Error::Config(e.to_string()))
    };
    let v2i_shadow = shadow(LinkKind::V2I)?;
    let v2v_shadow = shadow(LinkKind::V2V)?;
    let mut link = |a: (f64, f64), b: (f64, f64), kind: LinkKind| {
        let d = (a.0 - b.0).hypot(a.1 - b.1);
        let s = match kind {
            LinkKind::V2I => v2i_shadow.sample(rng),
            LinkKind::V2V => v2v_shadow.sample(rng),
        };
        model.slow_fading_gain(d, kind, s)
    };
    let pos = |v: usize| layout.vehicles[v];
    let (m, k) = (layout.cue_vehicle.len(), layout.due_tx_vehicle.len());

    let cue_bs_gain = (0..m)
        .map(|i| link(pos(layout.cue_vehicle[i]), layout.bs, LinkKind::V2I))
        .collect::<Result<Vec<_>>>()?;
    let due_gain = (0..k)
        .map(|i| {
            link(
                pos(layout.due_tx_vehicle[i]),
                pos(layout.due_rx_vehicle[i]),
                LinkKind::V2V,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let mut due_cross_gain = vec![vec![0.0; k]; k];
    for (j, row) in due_cross_gain.iter_mut().enumerate() {
        for (i, cell) in row.iter_mut().enumerate() {
            if i != j {
                *cell = link(
                    pos(layout.due_tx_vehicle[j]),
                    pos(layout.due_rx_vehicle[i]),
                    LinkKind::V2V,
                )?;
            }
        }
    }
    let mut cue_due_gain = vec![vec![0.0; k]; m];
    for (c, row) in cue_due_gain.iter_mut().enumerate() {
        for (i, cell) in row.iter_mut().enumerate() {
            *cell = link(
                pos(layout.cue_vehicle[c]),
                pos(layout.due_rx_vehicle[i]),
                LinkKind::V2V,
            )?;
        }
    }
    let due_bs_gain = (0..k)
        .map(|i| link(pos(layout.due_tx_vehicle[i]), layout.bs, LinkKind::V2I))
        .collect::<Result<Vec<_>>>()?;

    Ok(ScenarioDrop {
        seed,
        layout,
        cue_bs_gain,
        due_gain,
        due_cross_gain,
        cue_due_gain,
        due_bs_gain,
    })
}

/// Generates the drop identified by `drop_seed`. Pure in `(config, drop_seed)`.
pub fn generate_drop(config: &SystemConfig, drop_seed: u64) -> Result<ScenarioDrop> {
    config.validate()?;
    let needed = config.vehicles_needed();
    for attempt in 0..MAX_PLACEMENT_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(&[drop_seed, attempt]));
        let vehicles = place_vehicles(config, &mut rng);
        if vehicles.len() < needed {
            continue;
        }
        let layout = assign_roles(config, vehicles, &mut rng);
        return gains_for_layout(config, layout, drop_seed, &mut rng);
    }
    Err(Error::Config(format!(
        "road cannot host {needed} vehicles at {} km/h after {MAX_PLACEMENT_ATTEMPTS} placements",
        config.speed_kmh
    )))
}
