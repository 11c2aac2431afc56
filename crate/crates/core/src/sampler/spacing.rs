use serde::{Deserialize, Serialize};

use super::reference::{reference_curve, tail_mass, ReferenceKind};
use crate::error::{Error, Result};
use crate::models::{Configuration, Geometry};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Binning {
    pub bins: usize,
    /// Upper edge for unfolded spacings; larger values are counted as overflow.
    pub s_max: f64,
}

impl Default for Binning {
    fn default() -> Self {
        Self {
            bins: 40,
            s_max: 4.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpacingHistogram {
    pub bin_edges: Vec<f64>,
    pub densities: Vec<f64>,
    /// Number of pooled spacings.
    pub n_samples: usize,
    /// Mean raw spacing, used for unfolding.
    pub mean_spacing_raw: f64,
    /// Mean of the unfolded spacings.
    pub unfolded_mean: f64,
    /// Unfolded spacings at or beyond `s_max`.
    pub overflow: usize,
}

impl SpacingHistogram {
    pub fn bin_width(&self, k: usize) -> f64 {
        self.bin_edges[k + 1] - self.bin_edges[k]
    }

    pub fn bin_centers(&self) -> Vec<f64> {
        self.bin_edges
            .windows(2)
            .map(|w| 0.5 * (w[0] + w[1]))
            .collect()
    }

    /// Σ density·width; equals 1 minus the overflow fraction.
    pub fn total_mass(&self) -> f64 {
        (0..self.densities.len())
            .map(|k| self.densities[k] * self.bin_width(k))
            .sum()
    }

    fn overflow_fraction(&self) -> f64 {
        self.overflow as f64 / self.n_samples as f64
    }

    /// L¹ distance between two histograms on the same bins, overflow mass
    /// included.
    pub fn l1_distance(&self, other: &Self) -> Result<f64> {
        if self.bin_edges != other.bin_edges {
            return Err(Error::Domain("histograms have different bins".into()));
        }
        let body: f64 = (0..self.densities.len())
            .map(|k| (self.densities[k] - other.densities[k]).abs() * self.bin_width(k))
            .sum();
        Ok(body + (self.overflow_fraction() - other.overflow_fraction()).abs())
    }

    /// L¹ distance to a reference law, using its bin averages and tail mass.
    pub fn l1_to_reference(&self, kind: ReferenceKind) -> Result<f64> {
        let averages = bin_averages(kind, &self.bin_edges)?;
        let body: f64 = (0..self.densities.len())
            .map(|k| (self.densities[k] - averages[k]).abs() * self.bin_width(k))
            .sum();
        let s_max = *self.bin_edges.last().expect("at least one bin");
        Ok(body + (self.overflow_fraction() - tail_mass(kind, s_max)?).abs())
    }
}

/// Reference density averaged over each bin (Simpson, 16 panels per bin).
pub fn bin_averages(kind: ReferenceKind, edges: &[f64]) -> Result<Vec<f64>> {
    const PANELS: usize = 16;
    edges
        .windows(2)
        .map(|w| {
            let h = (w[1] - w[0]) / PANELS as f64;
            let grid: Vec<f64> = (0..=PANELS).map(|i| w[0] + i as f64 * h).collect();
            let p = reference_curve(kind, &grid)?;
            let mut acc = p[0] + p[PANELS];
            for (i, v) in p.iter().enumerate().take(PANELS).skip(1) {
                acc += v * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            Ok(acc * h / 3.0 / (w[1] - w[0]))
        })
        .collect()
}

/// Gap indices used for spacing statistics: all N arcs on the circle; on the
/// line the central third of the N - 1 gaps (all of them when fewer than 3).
pub fn bulk_gaps(geometry: Geometry, n: usize) -> std::ops::Range<usize> {
    match geometry {
        Geometry::Circle { .. } => 0..n,
        Geometry::Line => {
            let m = n.saturating_sub(1);
            let skip = m / 3;
            skip..m - skip
        }
    }
}

/// Raw neighbor spacings pooled over all samples, configuration by
/// configuration, in gap order.
pub fn pooled_spacings(samples: &[Configuration], geometry: Geometry) -> Result<Vec<f64>> {
    let first = samples.first().ok_or(Error::Empty("no samples"))?;
    let n = first.len();
    let range = bulk_gaps(geometry, n);
    let mut out = Vec::with_capacity(samples.len() * range.len());
    for cfg in samples {
        let x = cfg.as_slice();
        if x.len() != n {
            return Err(Error::Domain(
                "samples have different particle counts".into(),
            ));
        }
        for j in range.clone() {
            let s = match geometry {
                Geometry::Circle { l } if j == n - 1 => l - (x[0] - x[n - 1]),
                _ => x[j] - x[j + 1],
            };
            out.push(s);
        }
    }
    if out.is_empty() {
        return Err(Error::Empty("no spacings in the bulk"));
    }
    Ok(out)
}

/// Unfold raw spacings by their mean and bin them.
pub fn histogram(raw: &[f64], binning: Binning) -> Result<SpacingHistogram> {
    if raw.is_empty() {
        return Err(Error::Empty("no spacings"));
    }
    let mean = raw.iter().sum::<f64>() / raw.len() as f64;
    histogram_with_scale(raw, mean, binning)
}

/// Bin `raw / scale`.
fn histogram_with_scale(raw: &[f64], scale: f64, binning: Binning) -> Result<SpacingHistogram> {
    if raw.is_empty() {
        return Err(Error::Empty("no spacings"));
    }
    if binning.bins == 0 || binning.s_max.is_nan() || binning.s_max <= 0.0 {
        return Err(Error::Domain(format!("bad binning {binning:?}")));
    }
    let n = raw.len();
    let width = binning.s_max / binning.bins as f64;
    let mut counts = vec![0usize; binning.bins];
    let mut overflow = 0;
    let mut unfolded_sum = 0.0;
    for &r in raw {
        let s = r / scale;
        unfolded_sum += s;
        let k = (s / width) as usize;
        if k < binning.bins {
            counts[k] += 1;
        } else {
            overflow += 1;
        }
    }
    Ok(SpacingHistogram {
        bin_edges: (0..=binning.bins).map(|k| k as f64 * width).collect(),
        densities: counts
            .iter()
            .map(|&c| c as f64 / (n as f64 * width))
            .collect(),
        n_samples: n,
        mean_spacing_raw: scale,
        unfolded_mean: unfolded_sum / n as f64,
        overflow,
    })
}

/// Pool, unfold and bin with the default binning.
pub fn spacings(samples: &[Configuration], geometry: Geometry) -> Result<SpacingHistogram> {
    histogram(&pooled_spacings(samples, geometry)?, Binning::default())
}

/// L¹ distance between the spacing histograms of the first and second halves
/// of a chain, both unfolded by the whole-chain mean, together with the
/// number of configurations in the chain.
pub fn split_chain_l1(
    samples: &[Configuration],
    geometry: Geometry,
    binning: Binning,
) -> Result<(f64, usize)> {
    if samples.len() < 2 {
        return Err(Error::Empty(
            "split-chain diagnostic needs at least two samples",
        ));
    }
    let all = pooled_spacings(samples, geometry)?;
    let mean = all.iter().sum::<f64>() / all.len() as f64;
    let (a, b) = samples.split_at(samples.len() / 2);
    let ha = histogram_with_scale(&pooled_spacings(a, geometry)?, mean, binning)?;
    let hb = histogram_with_scale(&pooled_spacings(b, geometry)?, mean, binning)?;
    Ok((ha.l1_distance(&hb)?, samples.len()))
}
