//! Dormand-Prince 5(4) integration of linear radial equations `u'' = q(r) u`
//! with quintic Hermite dense output.

use crate::error::{Error, Result};

/// One accepted step with end values and one-sided second derivatives.
#[derive(Debug, Clone, Copy)]
struct Step {
    r0: f64,
    r1: f64,
    u0: f64,
    u1: f64,
    du0: f64,
    du1: f64,
    dd0: f64,
    dd1: f64,
}

/// Piecewise quintic Hermite representation of a solution `u(r)` on `[start, end]`.
#[derive(Debug, Clone)]
pub struct RadialProfile {
    steps: Vec<Step>,
}

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { rtol: 1e-10, max_steps: 2_000_000 }
    }
}

const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrate `u'' = q(r) u` across `breakpoints` (ascending), starting from
/// `(u, u')` at the first breakpoint. `q` is only sampled strictly inside each
/// segment so jumps of `q` at breakpoints are resolved exactly.
pub fn solve_linear<Q: Fn(f64) -> f64>(
    q: Q,
    breakpoints: &[f64],
    u_start: f64,
    du_start: f64,
    opts: OdeOptions,
) -> Result<RadialProfile> {
    let mut steps = Vec::new();
    let (mut u, mut du) = (u_start, du_start);
    let mut h_guess = f64::INFINITY;
    for seg in breakpoints.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        if b <= a {
            continue;
        }
        let pad = (b - a) * 1e-13;
        let qs = |r: f64| q(r.clamp(a + pad, b - pad));
        let mut r = a;
        let mut h = h_guess.min((b - a) * 0.05).min(b - a);
        let floor = 1e-3 * opts.rtol;
        let mut k0 = [du, qs(r) * u];
        while r < b {
            if steps.len() > opts.max_steps {
                return Err(Error::StepUnderflow { r });
            }
            let last = r + h >= b - 1e-14 * b.abs().max(1.0);
            if last {
                h = b - r;
            }
            let y = [u, du];
            let mut k = [[0.0; 2]; 7];
            k[0] = k0;
            for s in 1..7 {
                let mut yi = y;
                for (j, kj) in k.iter().enumerate().take(s) {
                    let aij = A[s - 1][j];
                    yi[0] += h * aij * kj[0];
                    yi[1] += h * aij * kj[1];
                }
                let rs = if s >= 5 { r + h } else { r + C[s] * h };
                k[s] = [yi[1], qs(rs) * yi[0]];
            }
            let mut yn = y;
            for j in 0..6 {
                yn[0] += h * A[5][j] * k[j][0];
                yn[1] += h * A[5][j] * k[j][1];
            }
            let mut err = 0.0f64;
            let scale_floor = floor * y[0].abs().max(y[1].abs()).max(1e-300);
            for c in 0..2 {
                let e: f64 = h * (0..7).map(|j| E[j] * k[j][c]).sum::<f64>();
                let sc = scale_floor + opts.rtol * y[c].abs().max(yn[c].abs());
                err = err.max(e.abs() / sc);
            }
            if !err.is_finite() {
                return Err(Error::StepUnderflow { r });
            }
            if err <= 1.0 {
                let r1 = if last { b } else { r + h };
                steps.push(Step {
                    r0: r,
                    r1,
                    u0: y[0],
                    u1: yn[0],
                    du0: y[1],
                    du1: yn[1],
                    dd0: k0[1],
                    dd1: k[6][1],
                });
                r = r1;
                u = yn[0];
                du = yn[1];
                k0 = k[6];
            }
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h *= fac;
            if h < 1e-15 * r.abs().max(1e-300) || h < 1e-300 {
                return Err(Error::StepUnderflow { r });
            }
        }
        h_guess = h;
    }
    if steps.is_empty() {
        return Err(Error::Internal("empty integration range".into()));
    }
    Ok(RadialProfile { steps })
}

impl RadialProfile {
    pub fn start(&self) -> f64 {
        self.steps[0].r0
    }

    pub fn end(&self) -> f64 {
        self.steps[self.steps.len() - 1].r1
    }

    /// `(u, u')` at the right end.
    pub fn end_values(&self) -> (f64, f64) {
        let s = self.steps[self.steps.len() - 1];
        (s.u1, s.du1)
    }

    /// Mesh points of accepted steps, including both ends.
    pub fn mesh(&self) -> Vec<f64> {
        let mut m: Vec<f64> = self.steps.iter().map(|s| s.r0).collect();
        m.push(self.end());
        m
    }

    pub fn num_steps(&self) -> usize {
        self.steps.len()
    }

    fn locate(&self, r: f64) -> &Step {
        let i = self.steps.partition_point(|s| s.r1 < r);
        &self.steps[i.min(self.steps.len() - 1)]
    }

    /// `(u(r), u'(r))` from the Hermite interpolant; `r` is clamped to the range.
    pub fn eval(&self, r: f64) -> (f64, f64) {
        let r = r.clamp(self.start(), self.end());
        let s = self.locate(r);
        let h = s.r1 - s.r0;
        let t = (r - s.r0) / h;
        let (t2, t3) = (t * t, t * t * t);
        let (t4, t5) = (t3 * t, t3 * t2);
        let h0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
        let h1 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
        let h2 = 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5);
        let g0 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
        let g1 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
        let g2 = 0.5 * (t3 - 2.0 * t4 + t5);
        let u = s.u0 * h0 + h * s.du0 * h1 + h * h * s.dd0 * h2 + s.u1 * g0 + h * s.du1 * g1 + h * h * s.dd1 * g2;
        let dh0 = -30.0 * t2 + 60.0 * t3 - 30.0 * t4;
        let dh1 = 1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4;
        let dh2 = 0.5 * (2.0 * t - 9.0 * t2 + 12.0 * t3 - 5.0 * t4);
        let dg1 = -12.0 * t2 + 28.0 * t3 - 15.0 * t4;
        let dg2 = 0.5 * (3.0 * t2 - 8.0 * t3 + 5.0 * t4);
        let du = (s.u0 * dh0 - s.u1 * dh0) / h + s.du0 * dh1 + h * s.dd0 * dh2 + s.du1 * dg1 + h * s.dd1 * dg2;
        (u, du)
    }
}
