//! Singular values, trace norms, and spectra comparison.
//!
//! Sizes in this crate are desk-scale (≤ 64×64), so both solvers are plain
//! Jacobi iterations: a one-sided Jacobi SVD working directly on columns (no
//! explicit Gram matrix, so small singular values keep full relative accuracy)
//! and a two-sided Jacobi eigensolver for Hermitian matrices. The two share no
//! code path, which lets tests cross-check σ(M) against √eig(M†M).

use num_complex::Complex64;

use crate::tensor::GeneralMatrix;
use crate::{Error, Result};

const MAX_SWEEPS: usize = 64;

/// Singular values in descending order.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularSpectrum {
    values: Vec<f64>,
}

impl SingularSpectrum {
    pub fn new(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.partial_cmp(a).expect("singular values are finite"));
        SingularSpectrum { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sum of singular values (Schatten 1-norm).
    pub fn trace_norm(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Singular values of an arbitrary complex matrix via one-sided Jacobi:
/// unitary plane rotations orthogonalize the columns, whose norms then are the
/// singular values. The returned spectrum has min(nrows, ncols) entries.
pub fn singular_values(m: &GeneralMatrix) -> Result<SingularSpectrum> {
    let (nr, nc) = (m.nrows(), m.ncols());
    // Work on the thin side: columns of the (possibly transposed) matrix,
    // stored column-major so each rotation streams two contiguous columns.
    let (rows, cols) = if nr >= nc { (nr, nc) } else { (nc, nr) };
    let mut a = vec![Complex64::ZERO; rows * cols];
    for r in 0..nr {
        for c in 0..nc {
            let v = m.entries()[r * nc + c];
            if nr >= nc {
                a[c * rows + r] = v;
            } else {
                a[r * rows + c] = v;
            }
        }
    }

    // Stop once every column pair is orthogonal relative to the rounding
    // floor of a length-`rows` inner product; a fixed 1e-15 would sit below
    // that floor for larger matrices and the sweep loop would never settle.
    let ortho_eps = f64::EPSILON * rows as f64;
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut all_orthogonal = true;
        for p in 0..cols.saturating_sub(1) {
            for q in p + 1..cols {
                let (cp, cq) = (p * rows, q * rows);
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = Complex64::ZERO;
                for r in 0..rows {
                    let u = a[cp + r];
                    let v = a[cq + r];
                    app += u.norm_sqr();
                    aqq += v.norm_sqr();
                    apq += u.conj() * v;
                }
                let habs = apq.norm();
                if habs <= ortho_eps * (app * aqq).sqrt() || app == 0.0 || aqq == 0.0 {
                    continue;
                }
                all_orthogonal = false;
                let phase = apq / habs;
                let zeta = (aqq - app) / (2.0 * habs);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for r in 0..rows {
                    let u = a[cp + r];
                    let v = a[cq + r];
                    a[cp + r] = cs * u - sn * (phase.conj() * v);
                    a[cq + r] = sn * (phase * u) + cs * v;
                }
            }
        }
        if all_orthogonal {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::SvdNoConvergence(MAX_SWEEPS));
    }

    let values = (0..cols)
        .map(|c| {
            a[c * rows..(c + 1) * rows]
                .iter()
                .map(|z| z.norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    Ok(SingularSpectrum::new(values))
}

/// Trace norm ‖m‖₁ = Σ singular values.
pub fn trace_norm(m: &GeneralMatrix) -> Result<f64> {
    Ok(singular_values(m)?.trace_norm())
}

/// True iff both spectra have the same length and agree elementwise within
/// `tol` (absolute).
pub fn spectra_equal(a: &SingularSpectrum, b: &SingularSpectrum, tol: f64) -> bool {
    a.len() == b.len()
        && a.values()
            .iter()
            .zip(b.values())
            .all(|(x, y)| (x - y).abs() <= tol)
}

/// Eigenvalues of a Hermitian matrix in ascending order, via cyclic two-sided
/// Jacobi with complex rotations. Only the lower/upper symmetric part
/// consistent with a Hermitian input is meaningful; small anti-Hermitian noise
/// is tolerated by working on (m + m†)/2.
pub fn hermitian_eigenvalues(m: &GeneralMatrix) -> Result<Vec<f64>> {
    let (nr, nc) = (m.nrows(), m.ncols());
    if nr != nc {
        return Err(Error::NotSquare { rows: nr, cols: nc });
    }
    let n = nr;
    let mut a = vec![Complex64::ZERO; n * n];
    for r in 0..n {
        for c in 0..n {
            a[r * n + c] = 0.5 * (m.entries()[r * n + c] + m.entries()[c * n + r].conj());
        }
    }

    let fro: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if fro == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let stop = 1e-14 * fro;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut worst = 0.0f64;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let h = a[p * n + q];
                let habs = h.norm();
                if habs > worst {
                    worst = habs;
                }
                if habs <= stop {
                    continue;
                }
                let alpha = a[p * n + p].re;
                let beta = a[q * n + q].re;
                let phase = h / habs;
                let zeta = (beta - alpha) / (2.0 * habs);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                // Unitary R = diag(1, e^{-iφ})·[[cs, sn], [-sn, cs]] (φ the
                // pivot's phase), so R[p][p]=cs, R[p][q]=sn, R[q][p]=-sn·e^{-iφ},
                // R[q][q]=cs·e^{-iφ}; apply A ← R† A R.
                for i in 0..n {
                    let aip = a[i * n + p];
                    let aiq = a[i * n + q];
                    a[i * n + p] = cs * aip - sn * (phase.conj() * aiq);
                    a[i * n + q] = sn * aip + cs * (phase.conj() * aiq);
                }
                for i in 0..n {
                    let api = a[p * n + i];
                    let aqi = a[q * n + i];
                    a[p * n + i] = cs * api - sn * (phase * aqi);
                    a[q * n + i] = sn * api + cs * (phase * aqi);
                }
            }
        }
        if worst <= stop {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::SvdNoConvergence(MAX_SWEEPS));
    }

    let mut eigs: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    eigs.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
    Ok(eigs)
}
