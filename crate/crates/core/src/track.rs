//! Continuation of point sets (roots, multipliers) along a scalar parameter.
//!
//! Consecutive samples are matched by connected components of the graph
//! joining points closer than a radius `r`. Each component must hold as many
//! new points as old ones, except near the edge of the search window where
//! points may enter or leave. The parameter step is halved on failure and
//! grown after success.

use num_complex::Complex;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackOptions {
    /// First step as a fraction of the path length.
    pub initial_step: f64,
    pub max_step: f64,
    pub min_step: f64,
    /// Largest admissible motion of a matched point per step.
    pub motion_cap: f64,
    /// Lower bound of the matching radius; closer points are matched as a cluster.
    pub radius_floor: f64,
}

impl Default for TrackOptions {
    fn default() -> Self {
        Self { initial_step: 0.05, max_step: 0.125, min_step: 1e-6, motion_cap: 0.25, radius_floor: 1e-3 }
    }
}

#[derive(Debug, Clone)]
pub struct TrackStep<T> {
    pub s: f64,
    pub data: T,
    pub points: Vec<Complex<f64>>,
    /// Trace id of each point.
    pub ids: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Track<T> {
    pub steps: Vec<TrackStep<T>>,
    pub trace_count: usize,
}

/// Samples of one continued point.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub id: usize,
    pub samples: Vec<(f64, Complex<f64>)>,
}

impl<T> Track<T> {
    pub fn traces(&self) -> Vec<Trace> {
        let mut traces: Vec<Trace> = (0..self.trace_count).map(|id| Trace { id, samples: Vec::new() }).collect();
        for step in &self.steps {
            for (p, &id) in step.points.iter().zip(&step.ids) {
                traces[id].samples.push((step.s, *p));
            }
        }
        traces
    }
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, i: usize) -> usize {
        let mut r = i;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut i = i;
        while self.0[i] != r {
            let next = self.0[i];
            self.0[i] = r;
            i = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Ids for `next`, or `None` if the step cannot be matched.
fn match_points(
    prev: &[Complex<f64>],
    prev_ids: &[usize],
    next: &[Complex<f64>],
    opts: &TrackOptions,
    in_band: &dyn Fn(Complex<f64>) -> bool,
    fresh: &mut usize,
) -> Option<Vec<usize>> {
    // Each old point may move by half the distance to its second-nearest distinct
    // neighbour, so a colliding pair (conjugate pairs meeting on the real axis)
    // stays one component. Coincident points (within the floor) are one cluster.
    let radius: Vec<f64> = (0..prev.len())
        .map(|i| {
            let mut near: Vec<f64> = (0..prev.len())
                .filter(|&k| k != i)
                .map(|k| (prev[i] - prev[k]).norm())
                .filter(|&d| d > opts.radius_floor)
                .collect();
            near.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
            let second = near.get(1).copied().unwrap_or(f64::INFINITY);
            (0.5 * second).clamp(opts.radius_floor, opts.motion_cap.max(opts.radius_floor))
        })
        .collect();
    let (p, q) = (prev.len(), next.len());
    let mut dsu = Dsu((0..p + q).collect());
    for i in 0..p {
        for k in i + 1..p {
            if (prev[i] - prev[k]).norm() <= opts.radius_floor {
                dsu.union(i, k);
            }
        }
        for j in 0..q {
            if (prev[i] - next[j]).norm() <= radius[i] {
                dsu.union(i, p + j);
            }
        }
    }
    for j in 0..q {
        for l in j + 1..q {
            if (next[j] - next[l]).norm() <= opts.radius_floor {
                dsu.union(p + j, p + l);
            }
        }
    }
    let mut comps: std::collections::BTreeMap<usize, (Vec<usize>, Vec<usize>)> = Default::default();
    for i in 0..p + q {
        let c = dsu.find(i);
        let e = comps.entry(c).or_default();
        if i < p {
            e.0.push(i);
        } else {
            e.1.push(i - p);
        }
    }
    let mut ids = vec![usize::MAX; q];
    for (olds, news) in comps.values() {
        if olds.len() != news.len() {
            let touches_band = olds.iter().any(|&i| in_band(prev[i])) || news.iter().any(|&j| in_band(next[j]));
            if !touches_band {
                return None;
            }
        }
        let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
        for &i in olds {
            for &j in news {
                pairs.push(((prev[i] - next[j]).norm(), i, j));
            }
        }
        pairs.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        let mut used_old = vec![false; p];
        for (_, i, j) in pairs {
            if !used_old[i] && ids[j] == usize::MAX {
                used_old[i] = true;
                ids[j] = prev_ids[i];
            }
        }
    }
    for id in ids.iter_mut().filter(|id| **id == usize::MAX) {
        *id = *fresh;
        *fresh += 1;
    }
    Some(ids)
}

/// Continues the point sets returned by `sample` from `s0` to `s1`.
pub fn track<T, F, B>(s0: f64, s1: f64, opts: &TrackOptions, mut sample: F, in_band: B) -> Result<Track<T>>
where
    F: FnMut(f64) -> Result<(T, Vec<Complex<f64>>)>,
    B: Fn(Complex<f64>) -> bool,
{
    let (data, points) = sample(s0)?;
    let ids: Vec<usize> = (0..points.len()).collect();
    let mut fresh = points.len();
    let mut steps = vec![TrackStep { s: s0, data, points, ids }];
    let length = s1 - s0;
    let mut pos = 0.0;
    let mut h = opts.initial_step;
    while pos < 1.0 && length != 0.0 {
        let h_try = h.min(1.0 - pos);
        let target = if pos + h_try >= 1.0 { 1.0 } else { pos + h_try };
        let s = s0 + target * length;
        let (data, points) = sample(s)?;
        let last = steps.last().expect("at least one step");
        let mut trial_fresh = fresh;
        match match_points(&last.points, &last.ids, &points, opts, &in_band, &mut trial_fresh) {
            Some(ids) => {
                fresh = trial_fresh;
                steps.push(TrackStep { s, data, points, ids });
                pos = target;
                h = (2.0 * h).min(opts.max_step);
            }
            None => {
                h *= 0.5;
                if h < opts.min_step {
                    return Err(Error::Numerical(format!(
                        "continuation cannot match points near parameter {} (step below {})",
                        s0 + pos * length,
                        opts.min_step
                    )));
                }
            }
        }
    }
    Ok(Track { steps, trace_count: fresh })
}
