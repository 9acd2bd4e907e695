//! Characteristic roots in a rectangle by the argument principle.
//!
//! The winding number of `d` along a cell boundary is accumulated from
//! phase increments whose size is controlled by `|d′/d|`. Cells are split
//! until each holds one root (or a cluster too small to separate), and the
//! roots are then refined by Newton's method on `d`.

use num_complex::Complex;

use super::charmat::CharacteristicMatrix;
use crate::error::{Error, Result};
use crate::linalg::{kernel_dimension, rank_threshold};
use crate::model::{Region, Tolerances};
use crate::scalar::Real;

/// Located root with its multiplicities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root<R: Real = f64> {
    pub value: Complex<R>,
    /// `dim ker Δ(λ)`.
    pub geometric: usize,
    /// Number of roots the enclosing cell counted (multiplicity of the zero of `d`).
    pub algebraic: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport<R: Real = f64> {
    /// Region actually used (possibly inflated away from boundary roots).
    pub region: Region,
    /// Argument-principle count over the region boundary.
    pub count: usize,
    /// Sorted by real part, then imaginary part.
    pub roots: Vec<Root<R>>,
}

impl<R: Real> SpectrumReport<R> {
    /// Algebraic count of roots with `Re λ > tol_axis`.
    pub fn unstable_count(&self, tol_axis: f64) -> usize {
        self.roots.iter().filter(|r| r.value.re.to_f64_lossy() > tol_axis).map(|r| r.algebraic).sum()
    }

    /// Roots with `|Re λ| ≤ tol_axis`.
    pub fn marginal(&self, tol_axis: f64) -> Vec<Root<R>> {
        self.roots.iter().filter(|r| r.value.re.to_f64_lossy().abs() <= tol_axis).copied().collect()
    }

    /// Roots repeated according to their algebraic count.
    pub fn expanded(&self) -> Vec<Complex<R>> {
        self.roots.iter().flat_map(|r| std::iter::repeat_n(r.value, r.algebraic)).collect()
    }

    /// Rightmost root, if any.
    pub fn dominant(&self) -> Option<Root<R>> {
        self.roots.iter().copied().max_by(|a, b| a.value.re.partial_cmp(&b.value.re).unwrap_or(std::cmp::Ordering::Equal))
    }
}

/// Region containing every root with `Re λ ≥ −left_margin`.
///
/// For `Re λ ≥ −δ` one has `|1 − e^{−λT}| ≤ 1 + e^{δT}`, so any root satisfies
/// `|λ| ≤ ‖J‖ + (1 + e^{δT}) α‖K‖`; the right edge uses the `Re λ ≥ 0` bound
/// `‖J‖ + 2α‖K‖` plus one.
pub fn default_region<R: Real>(cm: &CharacteristicMatrix<R>, tol: &Tolerances) -> Region {
    let nj = cm.jacobian_norm().to_f64_lossy();
    let nk = cm.gain_norm().to_f64_lossy();
    let t = cm.delay().to_f64_lossy();
    let delta = tol.left_margin;
    let n = cm.dimension() as f64;
    let strip = 4.0 * std::f64::consts::PI / t * (5.0 + n);
    Region {
        re_min: -delta,
        re_max: nj + 2.0 * nk + 1.0,
        im_max: strip.max(nj + (1.0 + (delta * t).exp()) * nk + 1.0),
    }
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    re0: f64,
    re1: f64,
    im0: f64,
    im1: f64,
}

impl Cell {
    fn from_region(r: &Region) -> Self {
        Cell { re0: r.re_min, re1: r.re_max, im0: -r.im_max, im1: r.im_max }
    }

    fn center(&self) -> Complex<f64> {
        Complex::new(0.5 * (self.re0 + self.re1), 0.5 * (self.im0 + self.im1))
    }

    fn diameter(&self) -> f64 {
        (self.re1 - self.re0).hypot(self.im1 - self.im0)
    }

    fn contains(&self, z: Complex<f64>, slack: f64) -> bool {
        z.re >= self.re0 - slack && z.re <= self.re1 + slack && z.im >= self.im0 - slack && z.im <= self.im1 + slack
    }

    fn split(&self, frac: f64) -> (Cell, Cell) {
        if self.re1 - self.re0 >= self.im1 - self.im0 {
            let m = self.re0 + frac * (self.re1 - self.re0);
            (Cell { re1: m, ..*self }, Cell { re0: m, ..*self })
        } else {
            let m = self.im0 + frac * (self.im1 - self.im0);
            (Cell { im1: m, ..*self }, Cell { im0: m, ..*self })
        }
    }
}

/// Off-center split fractions; the first keeps cut lines away from the real axis.
const SPLITS: [f64; 5] = [0.493_7, 0.416_3, 0.581_1, 0.357_1, 0.638_9];
const MAX_DEPTH: usize = 200;
const NEWTON_ITERS: usize = 60;

enum Contour {
    Count(usize),
    /// A root lies on or extremely close to the boundary.
    BoundaryHit,
}

struct Finder<'a, R: Real> {
    cm: &'a CharacteristicMatrix<R>,
    tol_res: f64,
    scale: f64,
}

impl<'a, R: Real> Finder<'a, R> {
    fn eval(&self, z: Complex<f64>) -> Option<(Complex<f64>, Complex<f64>)> {
        let zr = Complex::new(R::lit(z.re), R::lit(z.im));
        let (d, g) = self.cm.det_and_log_derivative(zr)?;
        let d = Complex::new(d.re.to_f64_lossy(), d.im.to_f64_lossy());
        let g = Complex::new(g.re.to_f64_lossy(), g.im.to_f64_lossy());
        (d.norm().is_finite() && g.norm().is_finite() && d.norm() > 0.0).then_some((d, g))
    }

    /// Phase change of `d` along the segment `a → b`.
    fn edge_phase(&self, a: Complex<f64>, b: Complex<f64>) -> Option<f64> {
        let len = (b - a).norm();
        if len == 0.0 {
            return Some(0.0);
        }
        let dir = (b - a) / len;
        let h_min = 1e-13 * self.scale.max(a.norm()).max(b.norm());
        let quarter = std::f64::consts::FRAC_PI_4;
        let (mut d_prev, mut g_prev) = self.eval(a)?;
        let mut s = 0.0;
        let mut total = 0.0;
        // `|d′/d|` is sampled only at step ends, so steps are also capped by the edge length.
        let h_cap = len / 32.0;
        let mut h = (quarter / g_prev.norm().max(1e-300)).min(h_cap);
        while s < len {
            h = h.min(len - s);
            loop {
                if h < h_min && s + h < len {
                    return None;
                }
                let z = if s + h >= len { b } else { a + dir * (s + h) };
                match (self.eval(z), self.eval(a + dir * (s + 0.5 * h))) {
                    (Some((d, g)), Some((_, g_mid))) => {
                        let step = (d / d_prev).arg();
                        if step.abs() <= quarter && h * g.norm().max(g_mid.norm()) <= 2.0 * quarter {
                            total += step;
                            s += h;
                            d_prev = d;
                            g_prev = g;
                            break;
                        }
                    }
                    _ => return None,
                }
                if h < h_min {
                    return None;
                }
                h *= 0.5;
            }
            h = (2.0 * h).min(quarter / g_prev.norm().max(1e-300)).min(h_cap);
        }
        Some(total)
    }

    fn count(&self, c: &Cell) -> Contour {
        let corners = [
            Complex::new(c.re0, c.im0),
            Complex::new(c.re1, c.im0),
            Complex::new(c.re1, c.im1),
            Complex::new(c.re0, c.im1),
        ];
        let mut total = 0.0;
        for i in 0..4 {
            match self.edge_phase(corners[i], corners[(i + 1) % 4]) {
                Some(p) => total += p,
                None => return Contour::BoundaryHit,
            }
        }
        let w = total / std::f64::consts::TAU;
        let n = w.round();
        if (w - n).abs() > 0.05 || n < 0.0 {
            return Contour::BoundaryHit;
        }
        Contour::Count(n as usize)
    }

    /// Newton (modified by `m` for clusters) from `z0`; returns the converged point.
    fn newton(&self, z0: Complex<f64>, m: usize) -> Option<Complex<f64>> {
        let mut z = z0;
        let mut last = f64::INFINITY;
        for _ in 0..NEWTON_ITERS {
            let Some((_, g)) = self.eval(z) else {
                return Some(z);
            };
            let step = m as f64 / g;
            if !step.norm().is_finite() {
                return None;
            }
            z -= step;
            let size = step.norm();
            if size <= 1e-14 * z.norm().max(1.0) || (size >= last && size <= 1e-9 * z.norm().max(1.0)) {
                break;
            }
            last = size;
        }
        let zr = Complex::new(R::lit(z.re), R::lit(z.im));
        (self.cm.relative_residual(zr).to_f64_lossy() <= self.tol_res).then_some(z)
    }

    fn solve(&self, cell: Cell, count: usize, depth: usize, out: &mut Vec<(Complex<f64>, usize)>) -> Result<()> {
        if count == 0 {
            return Ok(());
        }
        let slack = 1e-9 * cell.diameter().max(1e-300);
        if count == 1 {
            if let Some(z) = self.newton(cell.center(), 1) {
                if cell.contains(z, slack) {
                    out.push((z, 1));
                    return Ok(());
                }
            }
        } else if cell.diameter() <= 1e-6 * cell.center().norm().max(1.0) {
            if let Some(z) = self.newton(cell.center(), count) {
                if cell.contains(z, 1e-3 * cell.diameter()) {
                    out.push((z, count));
                    return Ok(());
                }
            }
        }
        if cell.diameter() <= 1e-10 * cell.center().norm().max(1.0) {
            // Roots closer than this are not separable in double precision.
            out.push((cell.center(), count));
            return Ok(());
        }
        if depth >= MAX_DEPTH {
            return Err(Error::Numerical(format!(
                "root isolation did not converge in cell Re [{}, {}], Im [{}, {}] holding {count} roots",
                cell.re0, cell.re1, cell.im0, cell.im1
            )));
        }
        for frac in SPLITS {
            let (a, b) = cell.split(frac);
            let (Contour::Count(na), Contour::Count(nb)) = (self.count(&a), self.count(&b)) else {
                continue;
            };
            if na + nb != count {
                continue;
            }
            self.solve(a, na, depth + 1, out)?;
            self.solve(b, nb, depth + 1, out)?;
            return Ok(());
        }
        Err(Error::Numerical(format!(
            "no consistent split of cell Re [{}, {}], Im [{}, {}] holding {count} roots",
            cell.re0, cell.re1, cell.im0, cell.im1
        )))
    }
}

/// All characteristic roots inside `region`, counted by the argument principle.
pub fn find_roots<R: Real>(cm: &CharacteristicMatrix<R>, region: &Region, tol: &Tolerances) -> Result<SpectrumReport<R>> {
    region.validate()?;
    let scale = region.re_max.abs().max(region.re_min.abs()).max(region.im_max).max(1.0);
    let finder = Finder { cm, tol_res: tol.tol_res.max(1e2 * R::eps().to_f64_lossy()), scale };

    let mut used = None;
    for k in 0..=4 {
        let pad = tol.tol_region * k as f64 / 4.0;
        let r = Region { re_min: region.re_min - pad, re_max: region.re_max + pad, im_max: region.im_max + pad };
        if let Contour::Count(n) = finder.count(&Cell::from_region(&r)) {
            used = Some((r, n));
            break;
        }
    }
    let (region, count) = used.ok_or_else(|| {
        Error::Numerical(format!("a root stays on the boundary of {region:?} under inflation by {}", tol.tol_region))
    })?;

    let mut found = Vec::new();
    finder.solve(Cell::from_region(&region), count, 0, &mut found)?;
    let achieved: usize = found.iter().map(|(_, m)| m).sum();
    if achieved != count {
        return Err(Error::Numerical(format!("located {achieved} of {count} roots in {region:?}")));
    }

    let n = cm.dimension();
    let rank_factor = R::lit(tol.rank_factor);
    let mut roots: Vec<Root<R>> = found
        .into_iter()
        .map(|(z, m)| {
            let mut z = z;
            if cm.is_real() && z.im.abs() <= 1e-13 * z.norm().max(1.0) {
                z.im = 0.0;
            }
            let value = Complex::new(R::lit(z.re), R::lit(z.im));
            let geometric = if m == 1 {
                1
            } else {
                let delta = cm.delta(value);
                let scale = cm.term_scale(value);
                let tau = rank_threshold(n, scale, rank_factor).max(R::lit(1e-6) * scale);
                kernel_dimension(&delta, tau).clamp(1, m)
            };
            Root { value, geometric, algebraic: m }
        })
        .collect();
    roots.sort_by(|a, b| {
        (a.value.re, a.value.im)
            .partial_cmp(&(b.value.re, b.value.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(SpectrumReport { region, count, roots })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DelayFeedback;
    use nalgebra::DMatrix;
    use std::f64::consts::PI;

    fn cm(j: &[f64], k: &[f64], t: f64) -> CharacteristicMatrix {
        let n = (j.len() as f64).sqrt() as usize;
        let fb = DelayFeedback::new(DMatrix::from_row_slice(n, n, k), t).unwrap();
        CharacteristicMatrix::new(DMatrix::from_row_slice(n, n, j), &fb, 1.0).unwrap()
    }

    #[test]
    fn scalar_without_gain() {
        let region = Region::new(0.01, 1.0, 1.0).unwrap();
        let r = find_roots(&cm(&[0.05], &[0.0], 2.0 * PI), &region, &Tolerances::default()).unwrap();
        assert_eq!(r.count, 1);
        assert_eq!(r.roots.len(), 1);
        assert!((r.roots[0].value - Complex::new(0.05, 0.0)).norm() < 1e-14);
        assert_eq!(r.roots[0].geometric, 1);
    }

    #[test]
    fn focus_without_gain() {
        let c = cm(&[0.05, -1.0, 1.0, 0.05], &[0.0; 4], 2.0 * PI);
        let r = find_roots(&c, &default_region(&c, &Tolerances::default()), &Tolerances::default()).unwrap();
        assert_eq!(r.count, 2);
        assert!((r.roots[0].value - Complex::new(0.05, -1.0)).norm() < 1e-13);
        assert!((r.roots[1].value - Complex::new(0.05, 1.0)).norm() < 1e-13);
        assert!(r.roots.iter().all(|x| x.geometric == 1 && x.algebraic == 1));
    }

    #[test]
    fn scalar_gain_many_roots() {
        let c = cm(&[0.05], &[0.3], 2.0 * PI);
        let tol = Tolerances::default();
        let r = find_roots(&c, &default_region(&c, &tol), &tol).unwrap();
        assert!(r.count >= 1);
        for root in &r.roots {
            assert!(c.relative_residual(root.value) <= 1e-10);
        }
        assert!(r.roots.iter().any(|x| x.value.im == 0.0 && x.value.re > 0.0));
    }

    #[test]
    fn double_root_with_two_dimensional_kernel() {
        // J = 0.05 I, K = 0: a double root with geometric multiplicity 2.
        let c = cm(&[0.05, 0.0, 0.0, 0.05], &[0.0; 4], 1.0);
        let tol = Tolerances::default();
        let r = find_roots(&c, &default_region(&c, &tol), &tol).unwrap();
        assert_eq!(r.roots.len(), 1);
        assert_eq!((r.roots[0].algebraic, r.roots[0].geometric), (2, 2));
        // Jordan block: algebraic 2, geometric 1.
        let c = cm(&[0.05, 1.0, 0.0, 0.05], &[0.0; 4], 1.0);
        let r = find_roots(&c, &default_region(&c, &tol), &tol).unwrap();
        assert_eq!(r.roots.len(), 1);
        assert_eq!((r.roots[0].algebraic, r.roots[0].geometric), (2, 1));
    }
}
