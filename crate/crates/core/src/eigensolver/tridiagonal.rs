//! Symmetric tridiagonal eigenvalue extraction: Sturm-sequence counting plus
//! bisection for the lowest k eigenvalues, and inverse iteration for
//! eigenvectors when a caller wants one.

use crate::error::{Error, Result};

/// Relative interval width at which a bisected eigenvalue is accepted.
/// Far below every tolerance in the crate, yet ~10 iterations cheaper than
/// driving each bracket to the last representable bit.
const BISECT_REL_TOL: f64 = 1.5e-14; // 2^-46

/// Symmetric tridiagonal operator: `diagonal` of length n, `off_diagonal`
/// of length n−1 (sub- and super-diagonal are equal by construction).
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator {
    pub diagonal: Vec<f64>,
    pub off_diagonal: Vec<f64>,
}

impl TridiagonalOperator {
    pub fn new(diagonal: Vec<f64>, off_diagonal: Vec<f64>) -> Result<Self> {
        if diagonal.is_empty() || off_diagonal.len() + 1 != diagonal.len() {
            return Err(Error::Domain(format!(
                "tridiagonal shape mismatch: {} diagonal, {} off-diagonal entries",
                diagonal.len(),
                off_diagonal.len()
            )));
        }
        if diagonal.iter().chain(off_diagonal.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite operator entry".into()));
        }
        Ok(TridiagonalOperator {
            diagonal,
            off_diagonal,
        })
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    /// Number of eigenvalues strictly below `lambda`, via the number of
    /// negative pivots in the LDLᵀ factorization of A − λI.
    pub fn count_below(&self, lambda: f64) -> usize {
        let mut count = 0usize;
        let mut q = self.diagonal[0] - lambda;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.diagonal.len() {
            let e = self.off_diagonal[i - 1];
            // keep the pivot away from exact zero so the recurrence stays finite
            let q_safe = if q.abs() < 1e-300 {
                if q.is_sign_negative() {
                    -1e-300
                } else {
                    1e-300
                }
            } else {
                q
            };
            q = (self.diagonal[i] - lambda) - e * e / q_safe;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin bounds enclosing the full spectrum.
    pub fn spectral_bounds(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off_diagonal[i - 1].abs() } else { 0.0 };
            let right = if i < n - 1 { self.off_diagonal[i].abs() } else { 0.0 };
            lo = lo.min(self.diagonal[i] - left - right);
            hi = hi.max(self.diagonal[i] + left + right);
        }
        let pad = 1e-12 * hi.abs().max(lo.abs()).max(1.0);
        (lo - pad, hi + pad)
    }

    /// The k smallest eigenvalues, ascending. Deterministic for fixed input.
    pub fn lowest_eigenvalues(&self, k: usize) -> Result<Vec<f64>> {
        self.lowest_eigenvalues_warm(k, None)
    }

    /// Pivot counts for a whole batch of shifts in one pass over the matrix.
    /// The per-shift recurrences are independent, so the divisions pipeline
    /// instead of forming one long latency chain.
    fn count_below_batch(&self, lambdas: &[f64], counts: &mut [usize]) {
        let n = self.diagonal.len();
        let m = lambdas.len();
        let mut q: Vec<f64> = Vec::with_capacity(m);
        for (j, &lam) in lambdas.iter().enumerate() {
            let first = self.diagonal[0] - lam;
            q.push(first);
            counts[j] = usize::from(first < 0.0);
        }
        for i in 1..n {
            let d = self.diagonal[i];
            let e2 = self.off_diagonal[i - 1] * self.off_diagonal[i - 1];
            for j in 0..m {
                let mut qj = q[j];
                if qj.abs() < 1e-300 {
                    qj = if qj.is_sign_negative() { -1e-300 } else { 1e-300 };
                }
                let next = (d - lambdas[j]) - e2 / qj;
                counts[j] += usize::from(next < 0.0);
                q[j] = next;
            }
        }
    }

    /// Same as [`lowest_eigenvalues`], seeding each bisection from nearby
    /// estimates (for example the previous grid of a refinement ladder).
    /// Estimates only narrow the starting brackets; counts re-validate them,
    /// so a bad estimate costs time, never correctness.
    ///
    /// All requested levels bisect in lockstep: each iteration evaluates the
    /// pending midpoints with one batched pass.
    pub fn lowest_eigenvalues_warm(&self, k: usize, warm: Option<&[f64]>) -> Result<Vec<f64>> {
        let n = self.dim();
        if k < 1 || k > n {
            return Err(Error::Domain(format!(
                "requested {k} eigenvalues of a dimension-{n} operator"
            )));
        }
        let (lo, hi) = self.spectral_bounds();
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Solver("non-finite spectral bounds".into()));
        }

        // brackets: count(a[i]) <= i and count(b[i]) >= i+1 once validated
        let mut a = vec![lo; k];
        let mut b = vec![hi; k];
        if let Some(guesses) = warm {
            let mut widen = vec![0.0f64; k];
            for i in 0..k {
                if let Some(&g) = guesses.get(i) {
                    if g.is_finite() {
                        let d = (g.abs() * 4e-3).max(1e-9);
                        a[i] = (g - d).max(lo);
                        b[i] = (g + d).min(hi);
                        widen[i] = d;
                    }
                }
            }
            // batched validation rounds: widen invalid bracket sides
            // geometrically until the counts confirm them
            let mut counts = vec![0usize; 2 * k];
            for _round in 0..64 {
                let mut shifts = Vec::with_capacity(2 * k);
                let mut owners = Vec::with_capacity(2 * k);
                for i in 0..k {
                    if widen[i] > 0.0 {
                        shifts.push(a[i]);
                        owners.push((i, false));
                        shifts.push(b[i]);
                        owners.push((i, true));
                    }
                }
                if shifts.is_empty() {
                    break;
                }
                self.count_below_batch(&shifts, &mut counts[..shifts.len()]);
                let mut any_invalid = false;
                for (slot, &(i, is_upper)) in owners.iter().enumerate() {
                    let count = counts[slot];
                    if is_upper {
                        if count < i + 1 {
                            if b[i] >= hi {
                                widen[i] = 0.0; // clamped at the global bound
                            } else {
                                b[i] = (b[i] + 8.0 * widen[i]).min(hi);
                                any_invalid = true;
                            }
                        }
                    } else if count > i {
                        if a[i] <= lo {
                            widen[i] = 0.0;
                        } else {
                            a[i] = (a[i] - 8.0 * widen[i]).max(lo);
                            any_invalid = true;
                        }
                    }
                }
                if any_invalid {
                    for w in &mut widen {
                        *w *= 8.0;
                    }
                } else {
                    break;
                }
            }
            // anything still marked gets the safe global bracket
            let mut counts = vec![0usize; 2 * k];
            let shifts: Vec<f64> = a.iter().chain(b.iter()).copied().collect();
            self.count_below_batch(&shifts, &mut counts);
            for i in 0..k {
                if counts[i] > i {
                    a[i] = lo;
                }
                if counts[k + i] < i + 1 {
                    b[i] = hi;
                }
            }
        }

        let mut active: Vec<usize> = (0..k).collect();
        let mut mids = Vec::with_capacity(k);
        let mut counts = vec![0usize; k];
        let mut iterations = 0usize;
        while !active.is_empty() {
            iterations += 1;
            if iterations > 300 {
                return Err(Error::Solver(format!(
                    "bisection did not converge for {} eigenvalues",
                    active.len()
                )));
            }
            mids.clear();
            mids.extend(active.iter().map(|&i| 0.5 * (a[i] + b[i])));
            self.count_below_batch(&mids, &mut counts[..active.len()]);
            let mut slot = 0usize;
            active.retain(|&i| {
                let mid = mids[slot];
                let count = counts[slot];
                slot += 1;
                if mid <= a[i] || mid >= b[i] {
                    return false; // interval exhausted at machine precision
                }
                if count > i {
                    b[i] = mid;
                } else {
                    a[i] = mid;
                }
                let tol = BISECT_REL_TOL * mid.abs().max(1e-30);
                b[i] - a[i] > tol
            });
        }

        let mut levels: Vec<f64> = (0..k).map(|i| 0.5 * (a[i] + b[i])).collect();
        levels.sort_by(f64::total_cmp);
        Ok(levels)
    }

    /// Eigenvector for an already-computed eigenvalue, by inverse iteration
    /// with a partially pivoted tridiagonal LU solve. Normalized to unit
    /// Euclidean norm with its largest-magnitude component positive.
    pub fn eigenvector(&self, lambda: f64) -> Result<Vec<f64>> {
        let n = self.dim();
        // tiny shift keeps the factorization nonsingular at a converged lambda
        let shift = lambda + lambda.abs().max(1.0) * 1e-13;
        let mut v = vec![1.0 / (n as f64).sqrt(); n];
        for _ in 0..4 {
            v = self.solve_shifted(shift, &v)?;
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if !(norm.is_finite() && norm > 0.0) {
                return Err(Error::Solver("inverse iteration broke down".into()));
            }
            for x in &mut v {
                *x /= norm;
            }
        }
        let (mut idx, mut max) = (0usize, 0.0f64);
        for (i, x) in v.iter().enumerate() {
            if x.abs() > max {
                max = x.abs();
                idx = i;
            }
        }
        if v[idx] < 0.0 {
            for x in &mut v {
                *x = -*x;
            }
        }
        Ok(v)
    }

    /// Solve (A − s·I)x = b with partial pivoting (two-band fill-in).
    fn solve_shifted(&self, s: f64, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        let mut d: Vec<f64> = self.diagonal.iter().map(|x| x - s).collect();
        let mut e: Vec<f64> = self.off_diagonal.clone(); // superdiagonal
        let mut f = vec![0.0; n]; // second superdiagonal from row swaps
        let mut x: Vec<f64> = b.to_vec();
        for i in 0..n - 1 {
            let sub = self.off_diagonal[i];
            if sub.abs() > d[i].abs() {
                // swap rows i and i+1
                let (di, ei, fi) = (d[i], e[i], f[i]);
                d[i] = sub;
                e[i] = d[i + 1];
                f[i] = if i + 1 < n - 1 { e[i + 1] } else { 0.0 };
                let m = di / d[i];
                d[i + 1] = ei - m * e[i];
                if i + 1 < n - 1 {
                    e[i + 1] = fi - m * f[i];
                }
                x.swap(i, i + 1);
                x[i + 1] -= m * x[i];
            } else {
                let pivot = if d[i].abs() < 1e-300 {
                    1e-300f64.copysign(d[i])
                } else {
                    d[i]
                };
                let m = sub / pivot;
                d[i + 1] -= m * e[i];
                x[i + 1] -= m * x[i];
            }
        }
        // back substitution
        for i in (0..n).rev() {
            let mut rhs = x[i];
            if i + 1 < n {
                rhs -= e[i] * x[i + 1];
            }
            if i + 2 < n {
                rhs -= f[i] * x[i + 2];
            }
            let pivot = if d[i].abs() < 1e-300 {
                1e-300f64.copysign(d[i])
            } else {
                d[i]
            };
            x[i] = rhs / pivot;
        }
        Ok(x)
    }
}
