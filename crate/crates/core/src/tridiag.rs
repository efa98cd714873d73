//! Lowest eigenvalues of a real symmetric tridiagonal matrix by
//! Sturm-sequence bisection.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl SymTridiagonal {
    /// `off[i]` couples rows `i` and `i + 1`.
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::Eigensolver(format!(
                "need n diagonal and n-1 off-diagonal entries, got {} and {}",
                diag.len(),
                off.len()
            )));
        }
        if diag.iter().chain(&off).any(|v| !v.is_finite()) {
            return Err(Error::Eigensolver("non-finite matrix entry".into()));
        }
        Ok(Self { diag, off })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.diag.len() {
            let e = self.off[i - 1];
            let prev = if q == 0.0 { f64::MIN_POSITIVE } else { q };
            q = self.diag[i] - x - e * e / prev;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.off[i - 1].abs();
            }
            if i + 1 < n {
                r += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// The `k` smallest eigenvalues in ascending order, each bisected until
    /// its bracket cannot shrink further in floating point.
    pub fn lowest(&self, k: usize) -> Result<Vec<f64>> {
        if k > self.len() {
            return Err(Error::Eigensolver(format!(
                "requested {k} eigenvalues of a {}x{} matrix",
                self.len(),
                self.len()
            )));
        }
        let (glo, ghi) = self.gershgorin();
        let pad = 1e-12 * (glo.abs().max(ghi.abs()).max(1.0));
        let mut out = Vec::with_capacity(k);
        let mut lo_floor = glo - pad;
        for j in 0..k {
            let (mut lo, mut hi) = (lo_floor, ghi + pad);
            for _ in 0..4096 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if self.count_below(mid) > j {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let value = 0.5 * (lo + hi);
            if !value.is_finite() {
                return Err(Error::Eigensolver(format!("eigenvalue {j} did not converge")));
            }
            out.push(value);
            lo_floor = lo;
        }
        Ok(out)
    }
}
