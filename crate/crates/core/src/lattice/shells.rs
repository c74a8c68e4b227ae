/// Number of integer points on each sphere `|n|^2 = k` for `k <= kmax`.
#[derive(Debug, Clone)]
pub struct ShellTable {
    counts: Vec<u64>,
}

impl ShellTable {
    /// Built as `r3(k) = sum_z r2(k - z^2)`.
    pub fn new(kmax: u64) -> Self {
        let kmax = kmax as usize;
        let s = (kmax as f64).sqrt() as usize + 1;
        let mut r2 = vec![0u64; kmax + 1];
        for x in 0..=s {
            let x2 = x * x;
            if x2 > kmax {
                break;
            }
            let wx = if x == 0 { 1 } else { 2 };
            for y in 0..=s {
                let m = x2 + y * y;
                if m > kmax {
                    break;
                }
                r2[m] += wx * if y == 0 { 1 } else { 2 };
            }
        }
        let mut counts = r2.clone();
        for z in 1..=s {
            let z2 = z * z;
            if z2 > kmax {
                break;
            }
            for (c, r) in counts[z2..].iter_mut().zip(&r2) {
                *c += 2 * r;
            }
        }
        Self { counts }
    }

    pub fn kmax(&self) -> u64 {
        (self.counts.len() - 1) as u64
    }

    pub fn count(&self, k: u64) -> u64 {
        self.counts[k as usize]
    }

    /// `(k, r3(k))` for every nonempty shell, in ascending `k`.
    pub fn occupied(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().enumerate().filter(|(_, c)| **c > 0).map(|(k, c)| (k as u64, *c))
    }

    /// Sum `r3(k) f(k)` over shells `1 <= k <= kmax`, in ascending `k`.
    /// Blocks are evaluated in parallel and combined in a fixed order.
    pub fn sum<F: Fn(u64) -> f64 + Sync>(&self, kmax: u64, f: F) -> f64 {
        use rayon::prelude::*;
        let kmax = kmax.min(self.kmax());
        let block = 4096u64;
        let nblocks = kmax.div_ceil(block);
        let partial: Vec<f64> = (0..nblocks)
            .into_par_iter()
            .map(|b| {
                let lo = (b * block + 1).max(1);
                let hi = ((b + 1) * block).min(kmax);
                let mut acc = 0.0;
                for k in lo..=hi {
                    let c = self.counts[k as usize];
                    if c > 0 {
                        acc += c as f64 * f(k);
                    }
                }
                acc
            })
            .collect();
        partial.iter().sum()
    }
}

/// All nonzero integer points of the cube `[-m, m]^3` in lexicographic order.
pub fn cube_points(m: i64) -> Vec<[i64; 3]> {
    let mut pts = Vec::with_capacity(((2 * m + 1).pow(3) - 1) as usize);
    for x in -m..=m {
        for y in -m..=m {
            for z in -m..=m {
                if x != 0 || y != 0 || z != 0 {
                    pts.push([x, y, z]);
                }
            }
        }
    }
    pts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_shells() {
        let t = ShellTable::new(12);
        let expect = [1, 6, 12, 8, 6, 24, 24, 0, 12, 30, 24, 24, 8];
        for (k, e) in expect.iter().enumerate() {
            assert_eq!(t.count(k as u64), *e, "k={k}");
        }
    }

    #[test]
    fn shell_counts_match_brute_force() {
        let kmax = 300u64;
        let t = ShellTable::new(kmax);
        let mut brute = vec![0u64; kmax as usize + 1];
        for p in cube_points(18) {
            let k = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) as u64;
            if k <= kmax {
                brute[k as usize] += 1;
            }
        }
        brute[0] = 1;
        for k in 0..=kmax {
            assert_eq!(t.count(k), brute[k as usize]);
        }
    }

    #[test]
    fn cube_count() {
        assert_eq!(cube_points(3).len(), 7 * 7 * 7 - 1);
    }
}
