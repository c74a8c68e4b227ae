//! Composite Gauss-Legendre grids for radial functions on `[0, R]`, with
//! spectral cumulative integration and the Newton potential of radial densities.

use crate::quadrature::gauss_legendre;

#[derive(Debug, Clone)]
pub struct RadialGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    order: usize,
    /// Panel endpoints; panel `i` owns nodes `i*order .. (i+1)*order`.
    edges: Vec<f64>,
    /// `cum[i][j] = int_{-1}^{x_i} l_j(t) dt` on the reference panel.
    cum: Vec<Vec<f64>>,
}

fn legendre_all(n: usize, x: f64) -> Vec<f64> {
    let mut p = vec![0.0; n + 1];
    p[0] = 1.0;
    if n >= 1 {
        p[1] = x;
    }
    for k in 2..=n {
        p[k] = ((2 * k - 1) as f64 * x * p[k - 1] - (k - 1) as f64 * p[k - 2]) / k as f64;
    }
    p
}

impl RadialGrid {
    /// Split each interval between consecutive `breakpoints` into `sub` panels
    /// carrying `order` Gauss-Legendre nodes each.
    pub fn new(breakpoints: &[f64], sub: usize, order: usize) -> Self {
        let (x, w) = gauss_legendre(order);
        let mut edges = vec![breakpoints[0]];
        for b in breakpoints.windows(2) {
            for j in 1..=sub {
                edges.push(b[0] + (b[1] - b[0]) * j as f64 / sub as f64);
            }
        }
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for e in edges.windows(2) {
            let (c, h) = (0.5 * (e[0] + e[1]), 0.5 * (e[1] - e[0]));
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(c + h * xi);
                weights.push(h * wi);
            }
        }
        let leg_nodes: Vec<Vec<f64>> = x.iter().map(|xi| legendre_all(order, *xi)).collect();
        let cum = (0..order)
            .map(|i| {
                let pi = &leg_nodes[i];
                (0..order)
                    .map(|j| {
                        let pj = &leg_nodes[j];
                        let mut s = 0.5 * (x[i] + 1.0);
                        for n in 1..order {
                            s += 0.5 * pj[n] * (pi[n + 1] - pi[n - 1]);
                        }
                        w[j] * s
                    })
                    .collect()
            })
            .collect();
        Self { nodes, weights, order, edges, cum }
    }

    pub fn sample<F: Fn(f64) -> f64>(&self, f: F) -> Vec<f64> {
        self.nodes.iter().map(|r| f(*r)).collect()
    }

    /// `int g dr` over the whole grid.
    pub fn integrate(&self, g: &[f64]) -> f64 {
        g.iter().zip(&self.weights).map(|(a, b)| a * b).sum()
    }

    /// `int_{start}^{r_i} g dr` at every node.
    pub fn cumulative(&self, g: &[f64]) -> Vec<f64> {
        let m = self.order;
        let mut out = vec![0.0; g.len()];
        let mut base = 0.0;
        for (panel, e) in self.edges.windows(2).enumerate() {
            let h = 0.5 * (e[1] - e[0]);
            let gp = &g[panel * m..(panel + 1) * m];
            for i in 0..m {
                let s: f64 = self.cum[i].iter().zip(gp).map(|(c, v)| c * v).sum();
                out[panel * m + i] = base + h * s;
            }
            base += gp.iter().zip(&self.weights[panel * m..(panel + 1) * m]).map(|(v, w)| v * w).sum::<f64>();
        }
        out
    }

    /// `int d^3y density(|y|)` for a radial density.
    pub fn volume_integral(&self, density: &[f64]) -> f64 {
        4.0 * std::f64::consts::PI * self.integrate(&self.weighted(density, 2))
    }

    fn weighted(&self, g: &[f64], power: i32) -> Vec<f64> {
        g.iter().zip(&self.nodes).map(|(v, r)| v * r.powi(power)).collect()
    }

    /// `(G * density)(r) = int density(y) / (4 pi |x - y|) d^3y` at the nodes,
    /// for a radial density supported on the grid.
    pub fn newton_potential(&self, density: &[f64]) -> Vec<f64> {
        let inner = self.cumulative(&self.weighted(density, 2));
        let outer_g = self.weighted(density, 1);
        let outer_cum = self.cumulative(&outer_g);
        let outer_total = self.integrate(&outer_g);
        self.nodes
            .iter()
            .enumerate()
            .map(|(i, r)| inner[i] / r + outer_total - outer_cum[i])
            .collect()
    }
}
