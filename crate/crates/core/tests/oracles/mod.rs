//! Reference computations that share no code path with the library:
//! a cyclic Jacobi eigensolver on the real embedding of a Hermitian matrix and
//! an exhaustive Bloch-sphere search for two-qubit product witnesses.

#![allow(dead_code)]

use hiding::ComplexMatrix;

/// Eigenvalues (unsorted) of a real symmetric matrix stored row-major.
pub fn jacobi_eigenvalues(mut a: Vec<f64>, n: usize) -> Vec<f64> {
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}

/// Eigenvalues of a Hermitian `h = x + iy` via the real symmetric embedding
/// `[[x, −y], [y, x]]`, which carries every eigenvalue of `h` twice.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Vec<f64> {
    let n = h.nrows();
    let m = 2 * n;
    let mut a = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)];
            a[i * m + j] = z.re;
            a[(i + n) * m + (j + n)] = z.re;
            a[i * m + (j + n)] = -z.im;
            a[(i + n) * m + j] = z.im;
        }
    }
    let mut ev = jacobi_eigenvalues(a, m);
    ev.sort_by(|x, y| y.total_cmp(x));
    // pairs are adjacent after sorting
    ev.chunks(2).map(|c| 0.5 * (c[0] + c[1])).collect()
}

pub fn hermitian_trace_norm(h: &ComplexMatrix) -> f64 {
    hermitian_eigenvalues(h).iter().map(|l| l.abs()).sum()
}

/// Sum of singular values of a square `m`, from the Hermitian dilation
/// `[[0, m], [m†, 0]]` whose spectrum is `±σ_i`.
pub fn singular_value_sum(m: &ComplexMatrix) -> f64 {
    let n = m.nrows();
    let mut d = ComplexMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            d[(i, n + j)] = m[(i, j)];
            d[(n + j, i)] = m[(i, j)].conj();
        }
    }
    0.5 * hermitian_trace_norm(&d)
}

type Q = [[(f64, f64); 2]; 2];

fn qubit_observable(theta: f64, phi: f64) -> Q {
    let (x, y, z) = (theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos());
    [[(z, 0.0), (x, -y)], [(x, y), (-z, 0.0)]]
}

fn scalar(s: f64) -> Q {
    [[(s, 0.0), (0.0, 0.0)], [(0.0, 0.0), (s, 0.0)]]
}

fn cmul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

/// `Re tr((f⊗g)·z)` for a 4×4 `z` written out index by index.
fn pairing(z: &ComplexMatrix, f: &Q, g: &Q) -> f64 {
    let mut acc = 0.0;
    for a in 0..2 {
        for a2 in 0..2 {
            for b in 0..2 {
                for b2 in 0..2 {
                    let fg = cmul(f[a][a2], g[b][b2]);
                    let zz = z[(a2 * 2 + b2, a * 2 + b)];
                    acc += cmul(fg, (zz.re, zz.im)).0;
                }
            }
        }
    }
    acc
}

/// Maximum of `|tr((f⊗g)·z)|` over selfadjoint qubit contractions, searched
/// over their extreme points (±1 and unit Bloch observables) on a grid and
/// then refined by compass search in the four angles.
pub fn qubit_product_norm(z: &ComplexMatrix, grid: usize) -> f64 {
    assert_eq!(z.nrows(), 4);
    let pi = std::f64::consts::PI;
    let mut dirs = Vec::new();
    for i in 0..=grid {
        for j in 0..(2 * grid) {
            dirs.push((pi * i as f64 / grid as f64, pi * j as f64 / grid as f64));
        }
    }
    let mut best = 0.0_f64;
    // scalar witnesses on either side
    for s in [1.0, -1.0] {
        for t in [1.0, -1.0] {
            best = best.max(pairing(z, &scalar(s), &scalar(t)).abs());
        }
        for &(th, ph) in &dirs {
            let o = qubit_observable(th, ph);
            best = best.max(pairing(z, &scalar(s), &o).abs());
            best = best.max(pairing(z, &o, &scalar(s)).abs());
        }
    }
    let mut seeds: Vec<(f64, [f64; 4])> = Vec::new();
    for &(t1, p1) in &dirs {
        let f = qubit_observable(t1, p1);
        for &(t2, p2) in &dirs {
            let v = pairing(z, &f, &qubit_observable(t2, p2)).abs();
            seeds.push((v, [t1, p1, t2, p2]));
        }
    }
    seeds.sort_by(|a, b| b.0.total_cmp(&a.0));
    let eval = |x: &[f64; 4]| pairing(z, &qubit_observable(x[0], x[1]), &qubit_observable(x[2], x[3])).abs();
    for &(v0, x0) in seeds.iter().take(8) {
        let (mut v, mut x) = (v0, x0);
        let mut step = pi / grid as f64;
        while step > 1e-9 {
            let mut improved = false;
            for k in 0..4 {
                for dir in [1.0, -1.0] {
                    let mut y = x;
                    y[k] += dir * step;
                    let w = eval(&y);
                    if w > v {
                        v = w;
                        x = y;
                        improved = true;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        best = best.max(v);
    }
    best
}
