//! Chebyshev–Gauss–Lobatto grids, barycentric interpolation and cumulative
//! (Clenshaw–Curtis) integration on an interval.

use nalgebra::DMatrix;

use crate::scalar::Real;

/// Chebyshev–Gauss–Lobatto nodes on `[a, b]`, stored in ascending order.
#[derive(Debug, Clone)]
pub struct ChebGrid<R> {
    a: R,
    b: R,
    nodes: Vec<R>,
    weights: Vec<R>,
}

impl<R: Real> ChebGrid<R> {
    /// `m >= 2` nodes; node 0 is `a`, node `m - 1` is `b`.
    pub fn lobatto(m: usize, a: R, b: R) -> Self {
        assert!(m >= 2, "a Lobatto grid needs at least two nodes");
        let n = m - 1;
        let half = R::lit(0.5);
        let nodes = (0..m)
            .map(|k| {
                if k == 0 {
                    a
                } else if k == n {
                    b
                } else {
                    // -cos(pi k / n) ascends from -1 to 1
                    let x = -(R::pi() * R::from_usize_lossy(k) / R::from_usize_lossy(n)).cos();
                    a + (b - a) * (x + R::one()) * half
                }
            })
            .collect();
        let weights = (0..m)
            .map(|k| {
                let sign = if k % 2 == 0 { R::one() } else { -R::one() };
                if k == 0 || k == n {
                    sign * half
                } else {
                    sign
                }
            })
            .collect();
        Self { a, b, nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[R] {
        &self.nodes
    }

    pub fn interval(&self) -> (R, R) {
        (self.a, self.b)
    }

    /// Values of every Lagrange basis polynomial at `x`.
    pub fn basis_at(&self, x: R) -> Vec<R> {
        let m = self.len();
        let mut out = vec![R::zero(); m];
        if let Some(k) = self.nodes.iter().position(|&xk| xk == x) {
            out[k] = R::one();
            return out;
        }
        let mut denom = R::zero();
        for k in 0..m {
            let t = self.weights[k] / (x - self.nodes[k]);
            out[k] = t;
            denom += t;
        }
        for v in &mut out {
            *v /= denom;
        }
        out
    }

    /// Barycentric interpolation of nodal values at `x`.
    pub fn interpolate(&self, values: &[R], x: R) -> R {
        self.basis_at(x)
            .iter()
            .zip(values)
            .fold(R::zero(), |acc, (&l, &v)| acc + l * v)
    }

    /// `Q[i][k] = ∫_a^{x_i} ℓ_k(s) ds`, exact for polynomials of degree `< m`.
    pub fn cumulative_matrix(&self) -> DMatrix<R> {
        let m = self.len();
        let n = m - 1;
        let nf = R::from_usize_lossy(n);
        let two = R::lit(2.0);
        let half_len = (self.b - self.a) / two;
        // Standard ordering x_j = cos(pi j / n) corresponds to ascending index n - j.
        let cos_table = |p: usize, j: usize| (R::pi() * R::from_usize_lossy(p * j % (2 * n)) / nf).cos();
        let mut q = DMatrix::zeros(m, m);
        for k in 0..m {
            let j_unit = n - k;
            // Chebyshev coefficients of the cardinal function with value 1 at x_{j_unit}.
            let mut c: Vec<R> = (0..=n)
                .map(|p| {
                    let mut v = cos_table(p, j_unit) * two / nf;
                    if j_unit == 0 || j_unit == n {
                        v /= two;
                    }
                    if p == 0 || p == n {
                        v /= two;
                    }
                    v
                })
                .collect();
            c.push(R::zero());
            // Antiderivative coefficients.
            let mut ant = vec![R::zero(); n + 2];
            for p in 0..=n {
                let cp = c[p];
                match p {
                    0 => ant[1] += cp,
                    1 => {
                        ant[2] += cp / R::lit(4.0);
                        ant[0] += cp / R::lit(4.0);
                    }
                    _ => {
                        let pf = R::from_usize_lossy(p);
                        ant[p + 1] += cp / (two * (pf + R::one()));
                        ant[p - 1] -= cp / (two * (pf - R::one()));
                    }
                }
            }
            // Value at -1: T_p(-1) = (-1)^p.
            let at_left = ant
                .iter()
                .enumerate()
                .fold(R::zero(), |acc, (p, &v)| if p % 2 == 0 { acc + v } else { acc - v });
            for i in 0..m {
                let j = n - i;
                let val = ant.iter().enumerate().fold(R::zero(), |acc, (p, &v)| {
                    // T_p(cos(pi j / n)) = cos(p pi j / n), with p up to n + 1
                    let arg = R::pi() * R::from_usize_lossy((p * j) % (2 * n)) / nf;
                    acc + v * arg.cos()
                });
                q[(i, k)] = (val - at_left) * half_len;
            }
        }
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_and_ordering() {
        let g = ChebGrid::lobatto(9, -2.0f64, 0.0);
        assert_eq!(g.nodes()[0], -2.0);
        assert_eq!(g.nodes()[8], 0.0);
        assert!(g.nodes().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn interpolation_reproduces_polynomials() {
        let g = ChebGrid::lobatto(7, -1.5f64, 0.5);
        let p = |x: f64| 3.0 * x.powi(5) - x.powi(2) + 0.25;
        let vals: Vec<f64> = g.nodes().iter().map(|&x| p(x)).collect();
        for &x in &[-1.3, -0.2, 0.0, 0.41] {
            assert!((g.interpolate(&vals, x) - p(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn cumulative_integration_is_exact_for_polynomials() {
        let (a, b) = (-std::f64::consts::TAU, 0.0);
        let g = ChebGrid::lobatto(12, a, b);
        let q = g.cumulative_matrix();
        let p = |x: f64| x.powi(7) - 2.0 * x.powi(3) + 1.0;
        let prim = |x: f64| x.powi(8) / 8.0 - x.powi(4) / 2.0 + x;
        let vals: Vec<f64> = g.nodes().iter().map(|&x| p(x)).collect();
        for i in 0..g.len() {
            let approx: f64 = (0..g.len()).map(|k| q[(i, k)] * vals[k]).sum();
            let exact = prim(g.nodes()[i]) - prim(a);
            assert!((approx - exact).abs() < 1e-9 * (1.0 + exact.abs()), "row {i}: {approx} vs {exact}");
        }
    }

    #[test]
    fn smooth_integrand_converges_spectrally() {
        let g = ChebGrid::lobatto(33, 0.0f64, 3.0);
        let q = g.cumulative_matrix();
        let vals: Vec<f64> = g.nodes().iter().map(|&x| x.exp() * x.sin()).collect();
        let prim = |x: f64| 0.5 * x.exp() * (x.sin() - x.cos());
        let last = g.len() - 1;
        let approx: f64 = (0..g.len()).map(|k| q[(last, k)] * vals[k]).sum();
        assert!((approx - (prim(3.0) - prim(0.0))).abs() < 1e-12);
    }
}
