//! Householder tridiagonalization followed by implicit-shift QL.

use super::SymMatrix;
use crate::{Error, Result};

const MAX_SWEEPS: usize = 60;

/// Eigen-decomposition of a symmetric matrix.
#[derive(Clone, Debug)]
pub struct Eigh {
    /// Ascending.
    pub values: Vec<f64>,
    /// Eigenvectors stored row by row: `vectors[i]` belongs to `values[i]`.
    pub vectors: Vec<Vec<f64>>,
}

impl Eigh {
    /// Column view helper: component `row` of eigenvector `col`.
    pub fn vector_entry(&self, row: usize, col: usize) -> f64 {
        self.vectors[col][row]
    }
}

pub fn eigh(m: &SymMatrix) -> Result<Eigh> {
    let (d, z) = decompose(m, true)?;
    let n = m.dim();
    let z = z.expect("vectors requested");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    Ok(Eigh {
        values: order.iter().map(|&i| d[i]).collect(),
        vectors: order.iter().map(|&i| z[i * n..(i + 1) * n].to_vec()).collect(),
    })
}

/// Eigenvalues only, ascending.
pub fn eigvalsh(m: &SymMatrix) -> Result<Vec<f64>> {
    let (mut d, _) = decompose(m, false)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

fn decompose(m: &SymMatrix, vectors: bool) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
    let n = m.dim();
    if n == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    if !m.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let mut a = m.as_slice().to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(&mut a, n, &mut d, &mut e, vectors);
    if !vectors {
        tql(&mut d, &mut e, None, n)?;
        return Ok((d, None));
    }
    // Transpose so that each eigenvector is a contiguous row during QL.
    let mut zt = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            zt[j * n + i] = a[i * n + j];
        }
    }
    tql(&mut d, &mut e, Some(&mut zt), n)?;
    Ok((d, Some(zt)))
}

/// Reduces `a` (row-major, overwritten) to tridiagonal form. On return `d`
/// holds the diagonal, `e[1..]` the subdiagonal, and when `vectors` is set `a`
/// holds the orthogonal transform with eigenvector components in columns.
fn tridiagonalize(a: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64], vectors: bool) {
    let idx = |i: usize, j: usize| i * n + j;
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = (0..i).map(|k| a[idx(i, k)].abs()).sum();
            if scale == 0.0 {
                e[i] = a[idx(i, l)];
            } else {
                for k in 0..i {
                    a[idx(i, k)] /= scale;
                    h += a[idx(i, k)] * a[idx(i, k)];
                }
                let f = a[idx(i, l)];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[idx(i, l)] = f - g;
                let mut f = 0.0;
                for j in 0..i {
                    if vectors {
                        a[idx(j, i)] = a[idx(i, j)] / h;
                    }
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[idx(j, k)] * a[idx(i, k)];
                    }
                    for k in j + 1..i {
                        g += a[idx(k, j)] * a[idx(i, k)];
                    }
                    e[j] = g / h;
                    f += e[j] * a[idx(i, j)];
                }
                let hh = f / (h + h);
                for j in 0..i {
                    let f = a[idx(i, j)];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[idx(j, k)] -= f * e[k] + g * a[idx(i, k)];
                    }
                }
            }
        } else {
            e[i] = a[idx(i, l)];
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for i in 0..n {
        if vectors {
            if d[i] != 0.0 {
                for j in 0..i {
                    let mut g = 0.0;
                    for k in 0..i {
                        g += a[idx(i, k)] * a[idx(k, j)];
                    }
                    for k in 0..i {
                        a[idx(k, j)] -= g * a[idx(k, i)];
                    }
                }
            }
            d[i] = a[idx(i, i)];
            a[idx(i, i)] = 1.0;
            for j in 0..i {
                a[idx(j, i)] = 0.0;
                a[idx(i, j)] = 0.0;
            }
        } else {
            d[i] = a[idx(i, i)];
        }
    }
}

/// Implicit-shift QL on the tridiagonal `(d, e)`. `zt` rows are rotated along.
fn tql(d: &mut [f64], e: &mut [f64], mut zt: Option<&mut Vec<f64>>, n: usize) -> Result<()> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_SWEEPS {
                return Err(Error::NoConvergence(format!("QL iteration stalled at index {l}")));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m as isize - 1;
            let mut underflow = false;
            while i >= l as isize {
                let iu = i as usize;
                let f = s * e[iu];
                let b = c * e[iu];
                r = f.hypot(g);
                e[iu + 1] = r;
                if r == 0.0 {
                    d[iu + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[iu + 1] - p;
                r = (d[iu] - g) * s + 2.0 * c * b;
                p = s * r;
                d[iu + 1] = g + p;
                g = c * r - b;
                if let Some(z) = zt.as_deref_mut() {
                    let (lo, hi) = z.split_at_mut((iu + 1) * n);
                    let zi = &mut lo[iu * n..];
                    let zi1 = &mut hi[..n];
                    for k in 0..n {
                        let f = zi1[k];
                        zi1[k] = s * zi[k] + c * f;
                        zi[k] = c * zi[k] - s * f;
                    }
                }
                i -= 1;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
